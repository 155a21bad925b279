"""Hamiltonians of exchange-coupled qubits.

Product basis ordering: qubit 0 is the most significant bit, so for two qubits
the basis is ``(|00>, |01>, |10>, |11>)`` and ``|10>`` has qubit 0 excited.

``S_z`` is taken with eigenvalues +-1 (``|1><1| - |0><0|``) and enters with a
prefactor ``omega0 / 2``, giving bare two-qubit energies ``-omega0, -lambda,
+lambda, +omega0``. The exchange sum runs over ordered pairs ``i != j``.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import DetuningConstraintViolation, StrongCouplingWarning

DETUNING_TOLERANCE = 1e-9
#: Drive must stay below gap / STRONG_COUPLING_MARGIN for the ladder reduction.
STRONG_COUPLING_MARGIN = 10.0

TWO_QUBIT_LABELS = ("00", "psi_minus", "psi_plus", "11")
THREE_QUBIT_LABELS = ("000", "W1", "W2", "111")

_SIGMA_PLUS = np.array([[0, 0], [1, 0]], dtype=complex)  # |1><0|
_SIGMA_MINUS = _SIGMA_PLUS.T.copy()
_SZ = np.diag([-1.0, 1.0]).astype(complex)


@dataclass(frozen=True)
class QubitSystem:
    n_qubits: int
    lam: float
    omega0: float
    dipoles: tuple[complex, ...] = ()

    def __post_init__(self):
        if self.n_qubits < 2:
            raise ValueError(f"need at least two qubits, got {self.n_qubits}")
        if self.omega0 <= 0:
            raise ValueError(f"omega0 must be positive, got {self.omega0}")
        dip = tuple(complex(d) for d in self.dipoles) or (1.0 + 0j,) * self.n_qubits
        if len(dip) != self.n_qubits:
            raise ValueError(f"expected {self.n_qubits} dipoles, got {len(dip)}")
        object.__setattr__(self, "dipoles", dip)

    @property
    def dim(self) -> int:
        return 2 ** self.n_qubits


def local_operator(op: np.ndarray, qubit: int, n_qubits: int) -> np.ndarray:
    """Embed a single-qubit operator acting on ``qubit``."""
    out = np.ones((1, 1), dtype=complex)
    for k in range(n_qubits):
        out = np.kron(out, op if k == qubit else np.eye(2))
    return out


def excitation_numbers(n_qubits: int) -> np.ndarray:
    idx = np.arange(2 ** n_qubits)
    return np.array([bin(i).count("1") for i in idx])


def build_bare_hamiltonian(sys: QubitSystem) -> np.ndarray:
    n = sys.n_qubits
    plus = [local_operator(_SIGMA_PLUS, i, n) for i in range(n)]
    minus = [local_operator(_SIGMA_MINUS, i, n) for i in range(n)]
    h = np.zeros((sys.dim, sys.dim), dtype=complex)
    for i in range(n):
        for j in range(n):
            if i != j:
                h += sys.lam * plus[i] @ minus[j]
    for i in range(n):
        h += 0.5 * sys.omega0 * local_operator(_SZ, i, n)
    return h


def dipole_operator(sys: QubitSystem) -> np.ndarray:
    """Sum over qubits of ``d10 |1><0| + conj(d10) |0><1|``."""
    n = sys.n_qubits
    out = np.zeros((sys.dim, sys.dim), dtype=complex)
    for i, d in enumerate(sys.dipoles):
        out += d * local_operator(_SIGMA_PLUS, i, n)
        out += np.conj(d) * local_operator(_SIGMA_MINUS, i, n)
    return out


@dataclass(frozen=True)
class LabFrameField:
    """Field ``eps(t) exp(-i w t) + c.c.`` with a slowly varying envelope."""

    envelope: Callable[[float], complex]
    carrier: float

    def __post_init__(self):
        if self.carrier <= 0:
            raise ValueError(f"carrier must be positive, got {self.carrier}")

    def __call__(self, t: float) -> float:
        return 2.0 * (complex(self.envelope(t)) * np.exp(-1j * self.carrier * t)).real


@dataclass(frozen=True)
class LabFrameHamiltonian:
    bare: np.ndarray
    dipole: np.ndarray
    fields: tuple[LabFrameField, ...]

    def __call__(self, t: float) -> np.ndarray:
        e = sum(f(t) for f in self.fields)
        return self.bare - e * self.dipole

    def max_frequency(self) -> float:
        evals = np.linalg.eigvalsh(self.bare)
        spread = float(evals[-1] - evals[0])
        return max([spread] + [f.carrier for f in self.fields])


def build_lab_frame_hamiltonian(sys: QubitSystem,
                                fields: Sequence[LabFrameField]) -> LabFrameHamiltonian:
    if not fields:
        raise ValueError("at least one field is required")
    return LabFrameHamiltonian(build_bare_hamiltonian(sys), dipole_operator(sys), tuple(fields))


def _as_function(x) -> Callable[[float], complex]:
    if callable(x):
        return x
    value = complex(x)
    return lambda t: value


def _peak(x) -> float | None:
    if hasattr(x, "shape") and hasattr(x.shape, "amplitude"):
        return x.shape.amplitude
    if hasattr(x, "amplitude"):
        return x.amplitude
    if callable(x):
        return None
    return abs(complex(x))


@dataclass(frozen=True)
class EffectiveScheme:
    """RWA level scheme: Hermitian matrix built from per-channel Rabi and detunings.

    Channel ``k`` listed as ``(row, col, k)`` with ``row > col`` puts ``-Omega_k``
    below the diagonal and ``-conj(Omega_k)`` above it.
    """

    basis_labels: tuple[str, ...]
    rabi_channels: tuple[tuple[int, int, int], ...]
    detuning_diagonal: Callable[[Sequence[float]], np.ndarray]
    rabi: tuple = ()
    detunings: tuple = ()
    constraint: Callable[[Sequence[float]], None] | None = None
    warnings: tuple[str, ...] = ()
    _rabi_fns: tuple = field(init=False, repr=False, compare=False)
    _det_fns: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        dim = len(self.basis_labels)
        for row, col, _ in self.rabi_channels:
            if not (0 <= col < row < dim):
                raise ValueError(f"invalid coupling ({row}, {col}) for dimension {dim}")
        object.__setattr__(self, "_rabi_fns", tuple(_as_function(r) for r in self.rabi))
        object.__setattr__(self, "_det_fns", tuple(_as_function(d) for d in self.detunings))

    @property
    def dim(self) -> int:
        return len(self.basis_labels)

    def matrix(self, rabi_values: Sequence[complex], detuning_values: Sequence[float]) -> np.ndarray:
        h = np.diag(np.asarray(self.detuning_diagonal(detuning_values), dtype=complex))
        for row, col, k in self.rabi_channels:
            h[row, col] = -rabi_values[k]
            h[col, row] = -np.conj(rabi_values[k])
        return h

    def rabi_at(self, t: float) -> np.ndarray:
        return np.array([f(t) for f in self._rabi_fns], dtype=complex)

    def detunings_at(self, t: float) -> np.ndarray:
        return np.array([f(t) for f in self._det_fns], dtype=complex).real

    def __call__(self, t: float) -> np.ndarray:
        det = self.detunings_at(t)
        if self.constraint is not None:
            self.constraint(det)
        return self.matrix(self.rabi_at(t), det)


def check_two_qubit_detunings(det: Sequence[float], tol: float = DETUNING_TOLERANCE) -> None:
    d1, d2, d3, d4 = det
    if abs(d1 + d3 - d2 - d4) > tol:
        raise DetuningConstraintViolation(
            f"detunings violate d1 + d3 = d2 + d4: {d1} + {d3} != {d2} + {d4}")


def _two_qubit_diagonal(det):
    d1, d2, _, d4 = det
    return [-d2, d1 - d2, 0.0, d4]


def _ladder_diagonal(det):
    d1, d2, d3 = det
    return [0.0, d1, d1 + d2, d1 + d2 + d3]


def two_qubit_effective_scheme(sys: QubitSystem, pulses: Sequence,
                               detunings: Sequence = (0.0, 0.0, 0.0, 0.0)) -> EffectiveScheme:
    """Four-level scheme on ``(a_00, a_minus, a_plus, a_11)``.

    ``pulses`` and ``detunings`` hold four entries each, either numbers or
    callables of time. Channels: 0: 00-minus, 1: 00-plus, 2: minus-11, 3: plus-11.
    """
    if sys.n_qubits != 2:
        raise ValueError("two-qubit scheme needs a two-qubit system")
    if len(pulses) != 4 or len(detunings) != 4:
        raise ValueError("two-qubit scheme takes four pulses and four detunings")
    if not any(callable(d) for d in detunings):
        check_two_qubit_detunings([float(d) for d in detunings])
    return EffectiveScheme(
        basis_labels=TWO_QUBIT_LABELS,
        rabi_channels=((1, 0, 0), (2, 0, 1), (3, 1, 2), (3, 2, 3)),
        detuning_diagonal=_two_qubit_diagonal,
        rabi=tuple(pulses),
        detunings=tuple(detunings),
        constraint=check_two_qubit_detunings,
    )


def three_qubit_effective_scheme(sys: QubitSystem, pulses: Sequence,
                                 detunings: Sequence = (0.0, 0.0, 0.0)) -> EffectiveScheme:
    """Ladder scheme on ``(a_000, a_W1, a_W2, a_111)``, valid for strong exchange.

    Issues :class:`StrongCouplingWarning` when the W/q gap ``3 lambda`` is below
    ten times the largest known peak Rabi frequency.
    """
    if sys.n_qubits != 3:
        raise ValueError("three-qubit scheme needs a three-qubit system")
    if len(pulses) != 3 or len(detunings) != 3:
        raise ValueError("three-qubit scheme takes three pulses and three detunings")
    notes = []
    peaks = [p for p in (_peak(x) for x in pulses) if p is not None]
    peak = max(peaks, default=0.0)
    gap = 3.0 * sys.lam
    if gap < STRONG_COUPLING_MARGIN * peak:
        msg = (f"3*lambda = {gap:g} is below {STRONG_COUPLING_MARGIN:g} x peak Rabi "
               f"{peak:g}; ladder reduction may be inaccurate")
        warnings.warn(msg, StrongCouplingWarning, stacklevel=2)
        notes.append(msg)
    return EffectiveScheme(
        basis_labels=THREE_QUBIT_LABELS,
        rabi_channels=((1, 0, 0), (2, 1, 1), (3, 2, 2)),
        detuning_diagonal=_ladder_diagonal,
        rabi=tuple(pulses),
        detunings=tuple(detunings),
        warnings=tuple(notes),
    )


def effective_rabi_two_qubit(envelopes: Sequence[complex], dipoles: Sequence[complex]) -> np.ndarray:
    e1, e2, e3, e4 = envelopes
    d1, d2 = dipoles
    diff = (d1 - d2) / math.sqrt(2)
    summ = (d1 + d2) / math.sqrt(2)
    return np.array([e1 * diff, e2 * summ, -e3 * diff, e4 * summ], dtype=complex)


def effective_rabi_three_qubit(envelopes: Sequence[complex], dipoles: Sequence[complex]) -> np.ndarray:
    e1, e2, e3 = envelopes
    total = sum(dipoles) / math.sqrt(3)
    return np.array([e1 * total, 2 * e2 * total, e3 * total], dtype=complex)


def two_qubit_channel_factors(dipoles: Sequence[complex]) -> np.ndarray:
    """Rabi frequency per unit field envelope for each two-qubit channel."""
    return effective_rabi_two_qubit((1, 1, 1, 1), dipoles)
