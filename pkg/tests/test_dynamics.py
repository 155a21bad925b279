import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from numpy.testing import assert_allclose
from scipy.linalg import expm

from coupledqubits.dynamics import analytic_constant_amplitude, analytic_two_level, integrate
from coupledqubits.errors import StepFailure
from coupledqubits.model import QubitSystem, two_qubit_effective_scheme
from coupledqubits.pulses import PulseShape

from conftest import random_state


def two_level(omega, delta):
    m = np.array([[0, -np.conj(omega)], [-omega, delta]], dtype=complex)
    return lambda t: m


def test_zero_hamiltonian_is_identity(rng):
    a0 = random_state(rng, 4)
    rec = integrate(lambda t: np.zeros((4, 4)), a0, 0.0, 10.0)
    assert_allclose(rec.states, np.broadcast_to(a0, rec.states.shape), atol=1e-15)


def test_resonant_rabi_populations():
    omega = 1.3
    rec = integrate(two_level(omega, 0.0), [1, 0], 0.0, math.pi / (2 * omega), samples=200)
    assert_allclose(rec.populations[:, 0], np.cos(omega * rec.times) ** 2, atol=1e-9)
    assert_allclose(rec.populations[:, 1], np.sin(omega * rec.times) ** 2, atol=1e-9)
    assert rec.final_populations[1] > 1 - 1e-9


def test_record_shapes_and_grid():
    rec = integrate(two_level(1.0, 0.5), [1, 0], -1.0, 2.0, samples=37, basis_labels=("g", "e"))
    assert rec.times.shape == (37,) and rec.states.shape == (37, 2)
    assert rec.times[0] == -1.0 and rec.times[-1] == 2.0
    assert_allclose(rec.population("g") + rec.population("e"), 1, atol=1e-9)
    assert np.all(np.isnan(rec.negativity))


def test_precondition_errors():
    with pytest.raises(ValueError):
        integrate(two_level(1, 0), [1, 1], 0, 1)
    with pytest.raises(ValueError):
        integrate(two_level(1, 0), [1, 0], 1, 1)


def test_analytic_two_level_matches_expm():
    rng = np.random.default_rng(5)
    for _ in range(20):
        omega = complex(*rng.normal(size=2))
        delta = rng.normal() * 3
        a0 = random_state(rng, 2)
        t = rng.uniform(0, 5)
        h = two_level(omega, delta)(0)
        assert_allclose(analytic_two_level(omega, delta, t, a0), expm(-1j * h * t) @ a0, atol=1e-12)


def test_analytic_two_level_zero_rabi():
    out = analytic_two_level(0.0, 2.0, np.array([0.0, 1.0]), [0, 1])
    assert_allclose(out[1], [0, np.exp(-2j)], atol=1e-15)


def test_integrator_matches_two_level_oracle_random_draws():
    rng = np.random.default_rng(11)
    worst = 0.0
    for _ in range(200):
        omega = rng.uniform(0.1, 3.0) * np.exp(1j * rng.uniform(0, 2 * np.pi))
        delta = rng.uniform(-5, 5)
        a0 = random_state(rng, 2)
        t1 = rng.uniform(0.5, 6.0)
        rec = integrate(two_level(omega, delta), a0, 0.0, t1, samples=25)
        exact = analytic_two_level(omega, delta, rec.times, a0)
        worst = max(worst, np.max(np.abs(rec.populations - np.abs(exact) ** 2)))
    assert worst < 1e-8


def test_far_detuned_transfer_is_suppressed():
    omega = 0.5
    rec = integrate(two_level(omega, 20 * omega), [1, 0], 0.0, 40.0, samples=400)
    # Lorentzian bound 4 Omega^2 / (Delta^2 + 4 Omega^2)
    assert rec.populations[:, 1].max() <= 4 / (400 + 4) + 1e-9


def test_constant_amplitude_oracle_against_integrator():
    sys = QubitSystem(2, 1.0, 2.0)
    for o10, o30 in [(1 - math.sqrt(2), 1.0), (2.0, 1.0), (0.5, 1.0), (1.0, 0.0)]:
        scheme = two_qubit_effective_scheme(sys, [o10, o10, o30, o30])
        rec = integrate(scheme, [1, 0, 0, 0], 0.0, 10.0, samples=500)
        exact = analytic_constant_amplitude(o10, o30, rec.times)
        assert np.max(np.abs(rec.populations - np.abs(exact) ** 2)) < 1e-8
        assert np.max(np.abs(rec.states - exact)) < 1e-8


def test_constant_amplitude_oracle_against_expm():
    sys = QubitSystem(2, 1.0, 2.0)
    o10, o30 = 0.7, -1.2
    h = two_qubit_effective_scheme(sys, [o10, o10, o30, o30])(0.0)
    for t in [0.0, 0.3, 2.2, 7.9]:
        assert_allclose(analytic_constant_amplitude(o10, o30, t),
                        expm(-1j * h * t) @ [1, 0, 0, 0], atol=1e-12)


def test_constant_amplitude_zero_drive():
    out = analytic_constant_amplitude(0.0, 0.0, np.linspace(0, 1, 3))
    assert_allclose(out[:, 0], 1)


@given(st.floats(0.1, 2.0), st.floats(-3, 3), st.floats(0.5, 4))
def test_time_reversal(omega, delta, t1):
    g = PulseShape.gaussian(omega, t1 / 2, t1 / 4)
    h = lambda t: np.array([[0, -g(t)], [-g(t), delta + 0.3 * t]], dtype=complex)
    a0 = np.array([0.6, 0.8j])
    fwd = integrate(h, a0, 0.0, t1, samples=5)
    back = integrate(h, fwd.final_state / np.linalg.norm(fwd.final_state), t1, 0.0, samples=5)
    assert np.max(np.abs(back.final_state - a0)) < 1e-7


def test_norm_preserved_on_long_protocol():
    sys = QubitSystem(2, 1.0, 2.0)
    g = PulseShape.gaussian(3.0, 500.0, 100.0)
    scheme = two_qubit_effective_scheme(sys, [g, g, 0.5, 0.5], [0.2, 0.1, -0.1, 0.0])
    rec = integrate(scheme, [1, 0, 0, 0], 0.0, 1000.0, dt_hint=0.5, samples=50)
    assert rec.norm_error.max() <= 1e-8


def test_dark_state_trapped():
    sys = QubitSystem(2, 1.0, 2.0)
    o1 = PulseShape.gaussian(5.0, 6.0, 1.0)
    o3 = PulseShape.gaussian(5.0, 4.0, 1.0)
    scheme = two_qubit_effective_scheme(sys, [o1, o1, o3, o3], [0.4, 0.4, -0.7, -0.7])
    a0 = np.array([0, -1, 1, 0]) / math.sqrt(2)
    rec = integrate(scheme, a0, -4.0, 14.0, dt_hint=0.1)
    assert fidelity_to(rec.final_state, a0) >= 1 - 1e-6
    assert rec.populations[:, 0].max() < 1e-12 and rec.populations[:, 3].max() < 1e-12


def fidelity_to(a, b):
    return abs(np.vdot(b, a)) ** 2


def test_step_failure_on_unresolvable_dynamics():
    with pytest.raises(StepFailure):
        integrate(lambda t: 1e15 * np.array([[0, 1], [1, 0.0]]), [1, 0], 0.0, 2.0)
    with pytest.raises(StepFailure):
        integrate(lambda t: np.array([[np.nan, 0], [0, 0]]), [1, 0], 0.0, 2.0)
