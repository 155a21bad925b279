"""Density-matrix utilities and the logarithmic negativity.

All functions accept stacked inputs: a state vector may be ``(..., d)`` and a
density matrix ``(..., d, d)`` with ``d = 2**n``. Qubit 0 is the most
significant bit of the product-basis index.
"""
from __future__ import annotations

import enum
import math
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionMismatch, UnknownBasis
from .model import THREE_QUBIT_LABELS, TWO_QUBIT_LABELS

_S2 = 1 / math.sqrt(2)
_S3 = 1 / math.sqrt(3)


def _ket(bits: str) -> np.ndarray:
    v = np.zeros(2 ** len(bits), dtype=complex)
    v[int(bits, 2)] = 1.0
    return v


class TargetState(enum.Enum):
    PHI_PLUS = "phi_plus"
    PHI_MINUS = "phi_minus"
    PSI_PLUS = "psi_plus"
    PSI_MINUS = "psi_minus"
    GHZ3 = "ghz3"
    W1 = "w1"
    W2 = "w2"

    @property
    def vector(self) -> np.ndarray:
        k = _ket
        return {
            TargetState.PHI_PLUS: _S2 * (k("00") + k("11")),
            TargetState.PHI_MINUS: _S2 * (k("00") - k("11")),
            TargetState.PSI_PLUS: _S2 * (k("10") + k("01")),
            TargetState.PSI_MINUS: _S2 * (k("10") - k("01")),
            TargetState.GHZ3: _S2 * (k("000") + k("111")),
            TargetState.W1: _S3 * (k("001") + k("010") + k("100")),
            TargetState.W2: _S3 * (k("110") + k("101") + k("011")),
        }[self]


# Columns: product-basis coordinates of each effective basis state.
_BASIS_MAPS = {
    TWO_QUBIT_LABELS: np.column_stack([
        _ket("00"), TargetState.PSI_MINUS.vector, TargetState.PSI_PLUS.vector, _ket("11")]),
    THREE_QUBIT_LABELS: np.column_stack([
        _ket("000"), TargetState.W1.vector, TargetState.W2.vector, _ket("111")]),
}


def basis_map(labels: Sequence[str]) -> np.ndarray:
    try:
        return _BASIS_MAPS[tuple(labels)]
    except KeyError:
        raise UnknownBasis(f"no product-basis expansion for basis {tuple(labels)}") from None


def amplitudes_to_product_basis(a, scheme) -> np.ndarray:
    """Rotate effective-basis amplitudes into the computational product basis.

    ``scheme`` is an :class:`~coupledqubits.model.EffectiveScheme` or its basis labels.
    """
    labels = getattr(scheme, "basis_labels", scheme)
    u = basis_map(labels)
    return np.asarray(a, dtype=complex) @ u.T


def density_matrix(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    return psi[..., :, None] * psi[..., None, :].conj()


def _n_qubits(dim: int) -> int:
    n = int(round(math.log2(dim)))
    if 2 ** n != dim:
        raise DimensionMismatch(f"dimension {dim} is not a power of two")
    return n


def _check_indices(indices: Iterable[int], n: int) -> tuple[int, ...]:
    idx = tuple(sorted(set(int(i) for i in indices)))
    for i in idx:
        if not 0 <= i < n:
            raise IndexError(f"qubit index {i} out of range for {n} qubits")
    return idx


def partial_transpose(rho, subsystem) -> np.ndarray:
    """Transpose the indices of the qubit(s) in ``subsystem``."""
    rho = np.asarray(rho, dtype=complex)
    dim = rho.shape[-1]
    n = _n_qubits(dim)
    qubits = _check_indices([subsystem] if np.ndim(subsystem) == 0 else subsystem, n)
    lead = rho.shape[:-2]
    t = rho.reshape(lead + (2,) * (2 * n))
    nl = len(lead)
    axes = list(range(t.ndim))
    for q in qubits:
        r, c = nl + q, nl + n + q
        axes[r], axes[c] = axes[c], axes[r]
    return t.transpose(axes).reshape(rho.shape)


def partial_trace(rho, keep) -> np.ndarray:
    """Reduced density matrix on the qubits in ``keep``."""
    rho = np.asarray(rho, dtype=complex)
    n = _n_qubits(rho.shape[-1])
    keep = _check_indices(keep, n)
    if not keep or len(keep) == n:
        raise ValueError("keep must be a non-empty proper subset of the qubits")
    lead = rho.shape[:-2]
    nl = len(lead)
    t = rho.reshape(lead + (2,) * (2 * n))
    traced = [q for q in range(n) if q not in keep]
    letters = "abcdefghijklmnopqrstuvwxyz"
    rows = list(letters[:n])
    cols = list(letters[n:2 * n])
    for q in traced:
        cols[q] = rows[q]
    out = "".join(rows[q] for q in keep) + "".join(cols[q] for q in keep)
    spec = "..." + "".join(rows) + "".join(cols) + "->..." + out
    d = 2 ** len(keep)
    return np.einsum(spec, t).reshape(lead + (d, d))


def trace_norm_hermitian(m) -> np.ndarray:
    return np.abs(np.linalg.eigvalsh(m)).sum(axis=-1)


def log_negativity(rho, partition=(0,)) -> np.ndarray | float:
    """``log2`` of the trace norm of the partial transpose over ``partition``."""
    value = np.log2(trace_norm_hermitian(partial_transpose(rho, partition)))
    return float(value) if np.ndim(value) == 0 else value


def state_negativity(psi, partition=(0,)) -> np.ndarray | float:
    """Log-negativity of pure state(s) given as amplitude vectors ``(..., d)``."""
    return log_negativity(density_matrix(psi), partition)


def traced_negativity(psi, traced_qubit: int = 0) -> np.ndarray | float:
    """Negativity of the two-qubit state left after tracing out one of three qubits."""
    rho = density_matrix(psi)
    n = _n_qubits(rho.shape[-1])
    keep = [q for q in range(n) if q != traced_qubit]
    return log_negativity(partial_trace(rho, keep), (0,))


def _vector(target) -> np.ndarray:
    return target.vector if isinstance(target, TargetState) else np.asarray(target, dtype=complex)


def fidelity(a, target) -> float:
    """``|<target|a>|**2``; insensitive to global phase."""
    a = np.asarray(a, dtype=complex)
    t = _vector(target)
    if a.shape[-1] != t.shape[-1]:
        raise DimensionMismatch(f"state dimension {a.shape[-1]} != target {t.shape[-1]}")
    value = np.abs(a @ t.conj()) ** 2
    return float(value) if np.ndim(value) == 0 else value


def ghz_fidelity(psi) -> tuple[float, float, float]:
    """Raw and relative-phase-optimised GHZ fidelity for a three-qubit state.

    Returns ``(raw, optimised, relative_phase)`` where ``relative_phase`` is the
    phase of the ``|111>`` amplitude relative to ``|000>``.
    """
    psi = np.asarray(psi, dtype=complex)
    if psi.shape[-1] != 8:
        raise DimensionMismatch("GHZ fidelity needs a three-qubit state")
    a, b = psi[0], psi[7]
    raw = fidelity(psi, TargetState.GHZ3)
    best = 0.5 * (abs(a) + abs(b)) ** 2
    phase = float(np.angle(b * np.conj(a))) if abs(a) * abs(b) > 0 else 0.0
    return raw, float(best), phase


def schmidt_negativity(psi) -> float:
    """Closed form ``log2(1 + 2|c00 c11 - c01 c10|)`` for a pure two-qubit state."""
    c = np.asarray(psi, dtype=complex)
    return float(np.log2(1 + 2 * abs(c[0] * c[3] - c[1] * c[2])))
