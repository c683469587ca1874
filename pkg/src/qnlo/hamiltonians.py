"""Model parameters and Hamiltonian builders.

All Hamiltonians are in units of the bare oscillator quantum and in the
interaction picture of the qubit, so the qubit splitting drops out:

    H = a^dag a + delta (a^dag + a)^4 - k sigma_z (a^dag + a)

The quartic term splits into a number-conserving part, a two-phonon part
and a four-phonon part; :class:`PhononLadderLevel` selects how many of
them are kept.
"""
from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.constants import hbar

from .fock import (
    QUBIT_ID,
    SIGMA_Z,
    FockTruncation,
    annihilation,
    number,
    position,
    qubit_tensor,
)

VALIDITY_LIMIT = 0.1


class ValidityWarning(UserWarning):
    """The weak-nonlinearity condition delta * <N> << 1 is at risk."""


@dataclass(frozen=True)
class LabParams:
    """Dimensionful parameters (SI units).

    ``omega_q`` is carried for completeness only: the qubit term commutes
    with everything else and never enters the scaled dynamics.
    """

    omega_q: float
    omega_o: float
    mass: float
    g_tilde: float = 0.0
    delta_tilde: float = 0.0

    def __post_init__(self):
        for name in ("omega_q", "omega_o", "mass"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be strictly positive")
        for name in ("g_tilde", "delta_tilde"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")


@dataclass(frozen=True)
class ScaledParams:
    """Dimensionless model parameters.

    k      coupling over oscillator frequency
    delta  quartic strength in units of the oscillator quantum
    alpha  initial coherent amplitude
    gamma  oscillator damping rate (0 for a closed system)
    """

    k: float = 0.5
    delta: float = 0.0
    alpha: complex = 2.0
    gamma: float = 0.0
    lab: LabParams | None = field(default=None, compare=False)

    def __post_init__(self):
        for name in ("k", "delta", "gamma"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative, got {getattr(self, name)}")
        if not self.valid:
            warnings.warn(
                f"delta*(|alpha|+2k)^2 = {self.validity_metric:.3g} > {VALIDITY_LIMIT}: "
                "weak-nonlinearity condition delta*<N> << 1 is violated",
                ValidityWarning,
                stacklevel=3,
            )

    @property
    def validity_metric(self) -> float:
        """A-priori estimate of ``delta * <N>`` along the evolution."""
        return self.delta * (abs(self.alpha) + 2 * self.k) ** 2

    @property
    def valid(self) -> bool:
        return self.validity_metric <= VALIDITY_LIMIT


def scale_params(lab: LabParams, alpha: complex = 2.0, gamma: float = 0.0) -> ScaledParams:
    """Map lab-frame parameters to (k, delta)."""
    x_zpf = np.sqrt(hbar / (2 * lab.mass * lab.omega_o))
    g = lab.g_tilde * x_zpf
    delta = lab.delta_tilde / (hbar * lab.omega_o) * x_zpf**4
    return ScaledParams(k=g / lab.omega_o, delta=delta, alpha=alpha, gamma=gamma, lab=lab)


class PhononLadderLevel(enum.Enum):
    NUMBER_STATE_ONLY = "ns"
    UP_TO_TWO_PHONON = "two"
    FULL = "full"


def quartic(trunc: FockTruncation) -> np.ndarray:
    """``(a^dag + a)^4`` by squaring the truncated ``(a^dag + a)^2``.

    Wrong only in the top two Fock levels, which lie in the guard band.
    """
    x2 = position(trunc) @ position(trunc)
    return x2 @ x2


def four_phonon(trunc: FockTruncation) -> np.ndarray:
    a = annihilation(trunc)
    a4 = np.linalg.matrix_power(a, 4)
    return a4 + a4.conj().T


def two_phonon(trunc: FockTruncation) -> np.ndarray:
    a = annihilation(trunc)
    ad = a.conj().T
    a2 = a @ a
    ad2 = ad @ ad
    return 6 * (ad2 + a2) + 4 * (ad2 @ ad @ a + ad @ a @ a2)


def number_state_part(trunc: FockTruncation) -> np.ndarray:
    """``6 (N^2 + N)``; omits the +3 left over from normal ordering."""
    n = np.arange(trunc.dim, dtype=float)
    return np.diag(6 * (n**2 + n)).astype(complex)


def _coupling(p: ScaledParams, trunc: FockTruncation) -> np.ndarray:
    return -p.k * qubit_tensor(SIGMA_Z, position(trunc))


def _on_both(o_op: np.ndarray) -> np.ndarray:
    return qubit_tensor(QUBIT_ID, o_op)


def build_full_hamiltonian(p: ScaledParams, trunc: FockTruncation) -> np.ndarray:
    """``N + delta (a^dag + a)^4 - k sigma_z (a^dag + a)`` on qubit (x) oscillator."""
    osc = number(trunc) + p.delta * quartic(trunc)
    return _on_both(osc) + _coupling(p, trunc)


def build_ladder_hamiltonian(
    p: ScaledParams, level: PhononLadderLevel, trunc: FockTruncation
) -> np.ndarray:
    """Hamiltonian with the quartic term cut at a given phonon order.

    ``FULL`` equals :func:`build_full_hamiltonian` minus ``3 delta``
    on the certified block (global phase only).
    """
    level = PhononLadderLevel(level)
    quart = number_state_part(trunc)
    if level in (PhononLadderLevel.UP_TO_TWO_PHONON, PhononLadderLevel.FULL):
        quart = quart + two_phonon(trunc)
    if level is PhononLadderLevel.FULL:
        quart = quart + four_phonon(trunc)
    return _on_both(number(trunc) + p.delta * quart) + _coupling(p, trunc)


def build_rwa_hamiltonian(p: ScaledParams, trunc: FockTruncation) -> np.ndarray:
    """``(1 + 6 delta) N + 6 delta N^2 - k sigma_z (a^dag + a)``."""
    n = np.arange(trunc.dim, dtype=float)
    osc = np.diag((1 + 6 * p.delta) * n + 6 * p.delta * n**2).astype(complex)
    return _on_both(osc) + _coupling(p, trunc)


def build_hamiltonian(model: str, p: ScaledParams, trunc: FockTruncation) -> np.ndarray:
    """Dispatch on a model name: ``full``, ``rwa``, ``ns``, ``two`` or ``ladder-full``."""
    if model == "full":
        return build_full_hamiltonian(p, trunc)
    if model == "rwa":
        return build_rwa_hamiltonian(p, trunc)
    if model == "ladder-full":
        return build_ladder_hamiltonian(p, PhononLadderLevel.FULL, trunc)
    return build_ladder_hamiltonian(p, PhononLadderLevel(model), trunc)


def build_lindblad_generator(
    p: ScaledParams, h: np.ndarray
) -> Callable[[np.ndarray], np.ndarray]:
    """Matrix-free right-hand side of the zero-temperature damped master equation.

        d rho/dt = -i[H, rho] + gamma/2 (2 a rho a^dag - N rho - rho N)

    with ``a`` acting on the oscillator only. The jump term and the
    number-operator products are applied by index shifts and diagonal
    scaling; the commutator uses block products when ``H`` does not mix
    the qubit states (always the case for the models built here).
    """
    d2 = h.shape[0]
    d = d2 // 2
    gamma = float(p.gamma)
    sq = np.sqrt(np.arange(1, d, dtype=float))
    nvec = np.tile(np.arange(d, dtype=float), 2)
    off = max(np.max(np.abs(h[:d, d:])), np.max(np.abs(h[d:, :d])))
    blocks = (h[:d, :d].copy(), h[d:, d:].copy()) if off == 0.0 else None
    jump_w = np.outer(sq, sq)[:, None, :]  # broadcasts over (d-1, 2, d-1)

    def commutator(rho):
        if blocks is None:
            return h @ rho - rho @ h
        out = np.empty_like(rho)
        for i, hi in enumerate(blocks):
            si = slice(i * d, (i + 1) * d)
            for j, hj in enumerate(blocks):
                sj = slice(j * d, (j + 1) * d)
                r = rho[si, sj]
                out[si, sj] = hi @ r - r @ hj
        return out

    def generator(rho):
        out = -1j * commutator(rho)
        if gamma:
            out -= 0.5 * gamma * (nvec[:, None] + nvec[None, :]) * rho
            r4 = rho.reshape(2, d, 2, d)
            o4 = out.reshape(2, d, 2, d)
            o4[:, :-1, :, :-1] += gamma * jump_w * r4[:, 1:, :, 1:]
        return out

    return generator
