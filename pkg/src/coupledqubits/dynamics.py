"""Time integration of ``i da/dt = H(t) a`` and closed-form reference solutions."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.integrate import DOP853

from .errors import StepFailure

NORM_TOLERANCE = 1e-9
DEFAULT_SAMPLES = 1000


@dataclass(frozen=True)
class TrajectoryRecord:
    """Sampled trajectory. ``states`` holds amplitudes in the basis named by ``basis_labels``."""

    times: np.ndarray
    states: np.ndarray
    basis_labels: tuple[str, ...]
    negativity: np.ndarray
    warnings: tuple[str, ...] = ()
    populations: np.ndarray = field(init=False)
    norm_error: np.ndarray = field(init=False)

    def __post_init__(self):
        pops = np.abs(self.states) ** 2
        object.__setattr__(self, "populations", pops)
        object.__setattr__(self, "norm_error", np.abs(np.sqrt(pops.sum(axis=1)) - 1.0))

    @property
    def final_state(self) -> np.ndarray:
        return self.states[-1]

    @property
    def final_populations(self) -> np.ndarray:
        return self.populations[-1]

    def population(self, label: str) -> np.ndarray:
        return self.populations[:, self.basis_labels.index(label)]

    def with_warnings(self, notes) -> "TrajectoryRecord":
        return TrajectoryRecord(self.times, self.states, self.basis_labels,
                                self.negativity, self.warnings + tuple(notes))


def integrate(hamiltonian: Callable[[float], np.ndarray], a0, t0: float, t1: float,
              dt_hint: float | None = None, *, samples: int = DEFAULT_SAMPLES,
              basis_labels: tuple[str, ...] | None = None,
              negativity: Callable[[np.ndarray], np.ndarray] | None = None,
              rtol: float = 1e-11, atol: float = 1e-13,
              min_step: float | None = None) -> TrajectoryRecord:
    """Integrate the Schrödinger equation from ``t0`` to ``t1``.

    Uses an adaptive 8th-order Runge-Kutta scheme (DOP853) with its 7th-order
    dense output for the sample grid. ``dt_hint`` caps the internal step so
    pulses in long quiet windows are not stepped over. The norm is never
    renormalised; drift shows up in ``norm_error``.

    ``t1 < t0`` integrates backwards in time.

    Args:
        hamiltonian: callable returning the Hermitian matrix at time ``t``.
        a0: initial amplitudes, normalised.
        negativity: optional vectorised map from an ``(n, dim)`` array of
            amplitudes to log-negativities.
        min_step: step-size floor; defaults to ``1e-12 * |t1 - t0|``.

    Raises:
        StepFailure: if error control drives the step below ``min_step`` or
            the Hamiltonian produces non-finite values.
    """
    a0 = np.asarray(a0, dtype=complex)
    if abs(np.linalg.norm(a0) - 1.0) > NORM_TOLERANCE:
        raise ValueError(f"initial state not normalised (norm {np.linalg.norm(a0)})")
    if t0 == t1:
        raise ValueError("empty time interval")
    if samples < 2:
        raise ValueError("need at least two samples")
    times = np.linspace(t0, t1, samples)
    max_step = np.inf if dt_hint is None else float(dt_hint)
    floor = 1e-12 * abs(t1 - t0) if min_step is None else float(min_step)

    def rhs(t, y):
        dy = -1j * (hamiltonian(t) @ y)
        if not np.isfinite(dy).all():
            raise StepFailure(f"non-finite derivative at t = {t}")
        return dy

    solver = DOP853(rhs, t0, a0, t1, max_step=max_step, rtol=rtol, atol=atol)
    states = np.empty((samples, a0.size), dtype=complex)
    states[0] = a0
    direction = np.sign(t1 - t0)
    k = 1
    while solver.status == "running":
        message = solver.step()
        if solver.status == "failed":
            raise StepFailure(message)
        if solver.step_size is not None and solver.step_size < floor and solver.status == "running":
            raise StepFailure(f"step size {solver.step_size:.3e} fell below floor {floor:.3e} "
                              f"at t = {solver.t}")
        j = k
        while j < samples and direction * (times[j] - solver.t) <= 0:
            j += 1
        if j > k:
            states[k:j] = solver.dense_output()(times[k:j]).T
            k = j
    labels = basis_labels or tuple(str(i) for i in range(a0.size))
    ne = negativity(states) if negativity is not None else np.full(samples, np.nan)
    return TrajectoryRecord(times, states, labels, np.asarray(ne, dtype=float))


def analytic_two_level(omega0: complex, delta: float, t, a0) -> np.ndarray:
    """Exact solution for ``H = [[0, -conj(omega0)], [-omega0, delta]]``.

    Returns shape ``(2,)`` for scalar ``t`` and ``(len(t), 2)`` otherwise.
    """
    a0 = np.asarray(a0, dtype=complex)
    t = np.asarray(t, dtype=float)
    w = np.sqrt(abs(omega0) ** 2 + 0.25 * delta ** 2)
    m = np.array([[-0.5 * delta, -np.conj(omega0)], [-omega0, 0.5 * delta]], dtype=complex)
    tt = t[..., None]
    cos = np.cos(w * tt)
    sinc = t[..., None] * np.sinc(w * tt / np.pi)  # sin(w t) / w, finite at w = 0
    out = cos * a0 - 1j * sinc * (m @ a0)
    return np.exp(-0.5j * delta * tt) * out


def analytic_constant_amplitude(omega10: float, omega30: float, t) -> np.ndarray:
    """Two-qubit amplitudes ``(a_00, a_minus, a_plus, a_11)`` for constant drives.

    Drives ``Omega1 = Omega2 = omega10`` and ``Omega3 = Omega4 = omega30``, all
    detunings zero, starting in ``|00>``.
    """
    t = np.asarray(t, dtype=float)
    s = omega10 ** 2 + omega30 ** 2
    if s == 0:
        out = np.zeros(t.shape + (4,), dtype=complex)
        out[..., 0] = 1.0
        return out
    w = np.sqrt(2 * s)
    c, sn = np.cos(w * t), np.sin(w * t)
    a00 = c * omega10 ** 2 / s + omega30 ** 2 / s
    apm = 1j * sn * omega10 / w
    a11 = c * omega10 * omega30 / s - omega10 * omega30 / s
    return np.stack([a00, apm, apm, a11], axis=-1).astype(complex)
