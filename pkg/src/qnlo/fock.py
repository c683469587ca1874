"""Truncated Fock space and its tensor product with a qubit.

Conventions used throughout the package:

* An oscillator operator is a dense ``(n_max+1, n_max+1)`` complex array.
* A hybrid state lives on qubit (x) oscillator. Kets have length
  ``2*(n_max+1)``: the spin-up block first, then the spin-down block,
  each ordered n = 0..n_max. ``np.kron(q_op, o_op)`` matches this layout.
* Density matrices are plain square arrays with the same index order.

The truncated ladder operators obey ``[a, a^dag] = 1`` everywhere except
the last diagonal entry, which equals ``-n_max``. That defect is not
patched; :func:`check_truncation` verifies that states keep away from it.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import DimensionMismatch, TruncationTooSmall

SIGMA_Z = np.diag([1.0, -1.0]).astype(complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
QUBIT_ID = np.eye(2, dtype=complex)
UP = np.array([1, 0], dtype=complex)
DOWN = np.array([0, 1], dtype=complex)


@dataclass(frozen=True)
class FockTruncation:
    """Oscillator cutoff plus the guard band used to certify states.

    ``n_max`` is the highest retained Fock level. The top ``margin`` levels
    form a guard band whose population must stay below ``tail_tol``.
    """

    n_max: int = 80
    tail_tol: float = 1e-9
    margin: int = 5

    def __post_init__(self):
        if self.margin < 0:
            raise ValueError("margin must be non-negative")
        if self.n_max < self.margin + 1:
            raise ValueError(f"n_max={self.n_max} must be >= margin + 1 = {self.margin + 1}")
        if self.tail_tol <= 0:
            raise ValueError("tail_tol must be positive")

    @property
    def dim(self) -> int:
        """Oscillator dimension, ``n_max + 1``."""
        return self.n_max + 1

    @property
    def hybrid_dim(self) -> int:
        return 2 * (self.n_max + 1)

    @property
    def certified(self) -> int:
        """Number of low Fock levels outside the guard band."""
        return self.n_max + 1 - self.margin


@dataclass(frozen=True)
class TruncationReport:
    tail: float
    tail_tol: float
    passed: bool


def annihilation(trunc: FockTruncation) -> np.ndarray:
    """Matrix of the lowering operator, ``<n-1|a|n> = sqrt(n)``."""
    return np.diag(np.sqrt(np.arange(1, trunc.dim)), 1).astype(complex)


def creation(trunc: FockTruncation) -> np.ndarray:
    return annihilation(trunc).conj().T


def number(trunc: FockTruncation) -> np.ndarray:
    return np.diag(np.arange(trunc.dim, dtype=float)).astype(complex)


def identity(trunc: FockTruncation) -> np.ndarray:
    return np.eye(trunc.dim, dtype=complex)


def position(trunc: FockTruncation) -> np.ndarray:
    """``a^dag + a`` (no 1/sqrt(2) factor)."""
    a = annihilation(trunc)
    return a + a.conj().T


def is_hermitian(m: np.ndarray, rtol: float = 1e-12) -> bool:
    scale = max(np.max(np.abs(m)), 1.0) if m.size else 1.0
    return bool(np.max(np.abs(m - m.conj().T), initial=0.0) <= rtol * scale)


def expm_hermitian(h: np.ndarray, t: float = 1.0) -> np.ndarray:
    """``exp(-i h t)`` for Hermitian ``h`` via its eigendecomposition."""
    w, v = np.linalg.eigh(h)
    return (v * np.exp(-1j * w * t)) @ v.conj().T


def expm(m: np.ndarray) -> np.ndarray:
    """Matrix exponential.

    Anti-Hermitian input is routed through a Hermitian eigensolve (exactly
    unitary output); anything else goes to scipy's Pade scaling-and-squaring.
    """
    if is_hermitian(1j * m):
        return expm_hermitian(1j * m, 1.0)
    return scipy.linalg.expm(m)


def _check_amplitude(alpha: complex, trunc: FockTruncation) -> None:
    r = abs(alpha)
    if r * r + 6 * r > trunc.n_max:
        raise TruncationTooSmall(
            f"|alpha|^2 + 6|alpha| = {r * r + 6 * r:.3g} exceeds n_max={trunc.n_max}"
        )


def displacement(alpha: complex, trunc: FockTruncation, check: bool = True) -> np.ndarray:
    """``D(alpha) = exp(alpha a^dag - alpha* a)`` on the truncated space.

    The result is exactly unitary; its matrix elements agree with the
    infinite-dimensional operator only on the low-lying block.
    """
    if check:
        _check_amplitude(alpha, trunc)
    a = annihilation(trunc)
    gen = alpha * a.conj().T - np.conj(alpha) * a
    return expm_hermitian(1j * gen, 1.0)


def coherent_ket(alpha: complex, trunc: FockTruncation, check: bool = True) -> np.ndarray:
    """Fock amplitudes ``exp(-|alpha|^2/2) alpha^n / sqrt(n!)``, renormalized."""
    if check:
        _check_amplitude(alpha, trunc)
    n = np.arange(trunc.dim)
    amps = np.empty(trunc.dim, dtype=complex)
    amps[0] = 1.0
    # alpha^n/sqrt(n!) by recurrence, avoids factorial overflow
    for j in range(1, trunc.dim):
        amps[j] = amps[j - 1] * alpha / np.sqrt(n[j])
    amps *= np.exp(-abs(alpha) ** 2 / 2)
    return amps / np.linalg.norm(amps)


def fock_ket(n: int, trunc: FockTruncation) -> np.ndarray:
    v = np.zeros(trunc.dim, dtype=complex)
    v[n] = 1.0
    return v


def qubit_tensor(q_op: np.ndarray, o_op: np.ndarray) -> np.ndarray:
    """Kronecker product ``q_op (x) o_op`` in the hybrid index order."""
    q_op = np.asarray(q_op)
    o_op = np.asarray(o_op)
    if q_op.shape != (2, 2):
        raise DimensionMismatch(f"qubit operator must be 2x2, got {q_op.shape}")
    if o_op.ndim != 2 or o_op.shape[0] != o_op.shape[1]:
        raise DimensionMismatch(f"oscillator operator must be square, got {o_op.shape}")
    return np.kron(q_op, o_op)


def hybrid_ket(up: np.ndarray, down: np.ndarray) -> np.ndarray:
    """Assemble ``|up> (x) up + |down> (x) down`` from two Fock vectors."""
    if up.shape != down.shape:
        raise DimensionMismatch("branch vectors differ in length")
    return np.concatenate([up, down]).astype(complex)


def split_ket(psi: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Inverse of :func:`hybrid_ket`: the unnormalized up and down branches."""
    d = psi.shape[0] // 2
    return psi[:d], psi[d:]


def ket_to_density(psi: np.ndarray) -> np.ndarray:
    return np.outer(psi, psi.conj())


def initial_state(alpha: complex, trunc: FockTruncation) -> np.ndarray:
    """``(|up> + |down>)/sqrt(2) (x) |alpha>``."""
    c = coherent_ket(alpha, trunc) / np.sqrt(2)
    return hybrid_ket(c, c)


def fock_populations(state: np.ndarray, n_levels: int | None = None) -> np.ndarray:
    """Occupation of each Fock level, summed over the qubit.

    Accepts oscillator or hybrid kets and density matrices. For a bare
    oscillator state pass ``n_levels=len(state)``; by default the layout is
    inferred as hybrid whenever the leading dimension is even and
    ``n_levels`` is not given.
    """
    state = np.asarray(state)
    d = state.shape[0]
    if n_levels is None:
        n_levels = d // 2 if d % 2 == 0 else d
    blocks = d // n_levels
    if state.ndim == 1:
        p = np.abs(state) ** 2
    else:
        p = np.real(np.diag(state))
    return p.reshape(blocks, n_levels).sum(axis=0)


def check_truncation(state: np.ndarray, trunc: FockTruncation) -> TruncationReport:
    """Population in the guard band ``(n_max - margin, n_max]``.

    ``state`` may be an oscillator or hybrid ket or density matrix whose
    size matches ``trunc``.
    """
    d = np.asarray(state).shape[0]
    if d == trunc.dim:
        pops = fock_populations(state, trunc.dim)
    elif d == trunc.hybrid_dim:
        pops = fock_populations(state, trunc.dim)
    else:
        raise DimensionMismatch(f"state of size {d} does not fit n_max={trunc.n_max}")
    tail = float(np.sum(pops[trunc.dim - trunc.margin:])) if trunc.margin else 0.0
    tail = max(tail, 0.0)
    return TruncationReport(tail=tail, tail_tol=trunc.tail_tol, passed=tail <= trunc.tail_tol)
