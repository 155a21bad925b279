"""Exact eigenstructure of the bare exchange Hamiltonian.

Degenerate eigenspaces are resolved into eigenstates of the cyclic shift
operator, whose eigenvalues ``q**k`` (``q = exp(2 pi i / N)``) label the states.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as la

from .errors import DimensionTooLarge
from .model import QubitSystem, build_bare_hamiltonian, excitation_numbers

MAX_QUBITS = 12
_DEGENERACY_TOL = 1e-9


@dataclass(frozen=True)
class EigenSystem:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # columns
    excitations: np.ndarray
    shift_index: np.ndarray  # k such that C v = q**k v
    n_qubits: int

    def labels(self) -> list[str]:
        return [state_label(self.n_qubits, int(n), int(k))
                for n, k in zip(self.excitations, self.shift_index)]


def state_label(n_qubits: int, excitations: int, k: int) -> str:
    """Human-readable name of a symmetry-resolved eigenstate."""
    if excitations == 0:
        return "0" * n_qubits
    if excitations == n_qubits:
        return "1" * n_qubits
    if n_qubits == 2:
        return "psi_plus" if k == 0 else "psi_minus"
    if k == 0 and excitations in (1, n_qubits - 1):
        return f"W{1 if excitations == 1 else 2}"
    return f"n{excitations}_q{k}"


def cyclic_shift_operator(n_qubits: int) -> np.ndarray:
    """Permutation ``|b_0 b_1 ... b_{N-1}> -> |b_{N-1} b_0 ... b_{N-2}>``.

    For three qubits this maps ``|001>`` to ``|100>``.
    """
    if n_qubits < 2:
        raise ValueError("need at least two qubits")
    dim = 2 ** n_qubits
    c = np.zeros((dim, dim))
    for i in range(dim):
        bits = format(i, f"0{n_qubits}b")
        j = int(bits[-1] + bits[:-1], 2)
        c[j, i] = 1.0
    return c


def _shift_index(eig: complex, n_qubits: int) -> int:
    return int(round(np.angle(eig) / (2 * np.pi / n_qubits))) % n_qubits


def diagonalize_bare(sys: QubitSystem) -> EigenSystem:
    if sys.n_qubits > MAX_QUBITS:
        raise DimensionTooLarge(f"{sys.n_qubits} qubits exceeds the dense limit of {MAX_QUBITS}")
    n = sys.n_qubits
    h = build_bare_hamiltonian(sys)
    shift = cyclic_shift_operator(n)
    exc = excitation_numbers(n)
    scale = max(1.0, abs(sys.lam), abs(sys.omega0))
    rows = []  # (energy, excitation, k, vector)
    for sector in range(n + 1):
        idx = np.flatnonzero(exc == sector)
        evals, evecs = np.linalg.eigh(h[np.ix_(idx, idx)])
        c_sub = shift[np.ix_(idx, idx)]
        start = 0
        while start < len(evals):
            stop = start + 1
            while stop < len(evals) and evals[stop] - evals[start] < _DEGENERACY_TOL * scale:
                stop += 1
            v = evecs[:, start:stop]
            # the shift restricted to an invariant subspace is unitary, hence normal:
            # its complex Schur form is diagonal with orthonormal Schur vectors
            t, z = la.schur(v.conj().T @ c_sub @ v, output="complex")
            vecs = v @ z
            energy = float(np.mean(evals[start:stop]))
            for m in range(stop - start):
                full = np.zeros(sys.dim, dtype=complex)
                full[idx] = vecs[:, m]
                rows.append((float(evals[start + m]), energy, sector,
                             _shift_index(t[m, m], n), _fix_phase(full)))
            start = stop
    rows.sort(key=lambda r: (round(r[1] / scale, 9), r[2], r[3]))
    return EigenSystem(
        eigenvalues=np.array([r[0] for r in rows]),
        eigenvectors=np.column_stack([r[4] for r in rows]),
        excitations=np.array([r[2] for r in rows]),
        shift_index=np.array([r[3] for r in rows]),
        n_qubits=n,
    )


def _fix_phase(v: np.ndarray) -> np.ndarray:
    """Make the last non-negligible component real and positive."""
    nz = np.flatnonzero(np.abs(v) > 1e-8)
    pivot = v[nz[-1]]
    return v * (abs(pivot) / pivot)


def w_state_energies(n_qubits: int, lam: float, omega0: float) -> tuple[float, float, float]:
    """Energies of the one- and (N-1)-excitation W states and their gap to the q-states."""
    if n_qubits < 2:
        raise ValueError("need at least two qubits")
    e1 = (n_qubits - 1) * lam - (n_qubits - 2) * omega0 / 2
    e2 = (n_qubits - 1) * lam + (n_qubits - 2) * omega0 / 2
    return e1, e2, n_qubits * lam


def spectrum_table(sys: QubitSystem) -> list[dict]:
    es = diagonalize_bare(sys)
    return [
        {"index": i, "energy": float(e), "excitations": int(n), "shift_k": int(k), "label": lab}
        for i, (e, n, k, lab) in enumerate(zip(es.eigenvalues, es.excitations,
                                               es.shift_index, es.labels()))
    ]
