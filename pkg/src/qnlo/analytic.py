"""Closed-form states for the harmonic case and the weak-coupling RWA.

Harmonic oscillator (delta = 0): each qubit branch carries a coherent
state,

    |psi(t)> = e^{i k^2 (t - sin t)} / sqrt(2)
               * (e^{Phi} |up>|alpha_up> + e^{-Phi} |down>|alpha_down>)

    eta        = 1 - e^{-it}
    Phi        = i k Im(alpha eta)
    alpha_up   = alpha e^{-it} + k eta
    alpha_down = alpha e^{-it} - k eta

Weak coupling with a Kerr term (RWA, real alpha): the coherent amplitudes
(alpha -/+ k) rotate at 1 + 6 delta, pick up the Kerr phase
exp(-6 i t delta N^2), and are displaced back by +/- k.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ComplexAlphaUnsupported, NonzeroDelta
from .fock import FockTruncation, coherent_ket, displacement, hybrid_ket
from .hamiltonians import ScaledParams

RWA_WARN_LIMIT = 0.01


class RwaAccuracyWarning(UserWarning):
    """Neglected k*delta cross terms may no longer be small."""


@dataclass(frozen=True)
class LinearSolution:
    t: float
    phi: complex
    alpha_up: complex
    alpha_down: complex
    eta: complex
    global_phase: complex


@dataclass(frozen=True)
class RwaSolution:
    t: float
    alpha_up_tilde: complex
    alpha_down_tilde: complex
    displacement: float
    kerr_phase_applied: bool = True


def _require_linear(p: ScaledParams) -> None:
    if p.delta != 0:
        raise NonzeroDelta(f"closed form needs delta = 0, got {p.delta}")


def linear_solution(p: ScaledParams, t: float) -> LinearSolution:
    _require_linear(p)
    eta = 1 - np.exp(-1j * t)
    rot = p.alpha * np.exp(-1j * t)
    return LinearSolution(
        t=t,
        phi=1j * p.k * np.imag(p.alpha * eta),
        alpha_up=rot + p.k * eta,
        alpha_down=rot - p.k * eta,
        eta=eta,
        global_phase=np.exp(1j * p.k**2 * (t - np.sin(t))),
    )


def linear_state(p: ScaledParams, t: float, trunc: FockTruncation) -> np.ndarray:
    """Exact hybrid ket at time ``t`` for the harmonic oscillator."""
    s = linear_solution(p, t)
    up = np.exp(s.phi) * coherent_ket(s.alpha_up, trunc)
    down = np.exp(-s.phi) * coherent_ket(s.alpha_down, trunc)
    return s.global_phase * hybrid_ket(up, down) / np.sqrt(2)


def linear_branch_overlap(p: ScaledParams, t: float) -> complex:
    """``<alpha_up|alpha_down>`` including the branch phases e^{-/+Phi}."""
    s = linear_solution(p, t)
    a, b = s.alpha_up, s.alpha_down
    coh = np.exp(-(abs(a) ** 2 + abs(b) ** 2) / 2 + np.conj(a) * b)
    return np.conj(np.exp(s.phi)) * np.exp(-s.phi) * coh


def linear_negativity_closed_form(p: ScaledParams, t) -> np.ndarray | float:
    """Raw negativity ``1/2 sqrt(1 - |s|^2)`` with ``|s| = exp(-2 k^2 |eta|^2)``.

    Vectorized over ``t``. Multiply by 2 for the scale whose maximum is 1.
    """
    _require_linear(p)
    t = np.asarray(t, dtype=float)
    eta2 = np.abs(1 - np.exp(-1j * t)) ** 2
    s2 = np.exp(-4 * p.k**2 * eta2)
    out = 0.5 * np.sqrt(np.clip(1 - s2, 0.0, None))
    return float(out) if out.ndim == 0 else out


def linear_qubit_coherence(p: ScaledParams, t) -> np.ndarray | float:
    """``|<up|rho_q|down>| = 1/2 exp(4 k^2 (cos t - 1))``."""
    _require_linear(p)
    t = np.asarray(t, dtype=float)
    out = 0.5 * np.exp(4 * p.k**2 * (np.cos(t) - 1))
    return float(out) if out.ndim == 0 else out


def rwa_solution(p: ScaledParams, t: float) -> RwaSolution:
    if abs(np.imag(p.alpha)) > 0:
        raise ComplexAlphaUnsupported(
            "the RWA wave function is only available for real alpha"
        )
    alpha = float(np.real(p.alpha))
    rot = np.exp(-1j * (1 + 6 * p.delta) * t)
    return RwaSolution(
        t=t,
        alpha_up_tilde=rot * (alpha - p.k),
        alpha_down_tilde=rot * (alpha + p.k),
        displacement=p.k,
    )


@lru_cache(maxsize=16)
def _displacement_cached(k: float, trunc: FockTruncation) -> np.ndarray:
    d = displacement(k, trunc)
    d.setflags(write=False)
    return d


def rwa_state(p: ScaledParams, t: float, trunc: FockTruncation) -> np.ndarray:
    """Approximate hybrid ket for the RWA Hamiltonian at time ``t``.

    Order of operations per branch: coherent ket at the rotated amplitude,
    then the diagonal Kerr phase, then the displacement by +k (up) or -k
    (down).
    """
    s = rwa_solution(p, t)
    nbar = (abs(p.alpha) + p.k) ** 2
    if p.k * p.delta * abs(t) * nbar**2 > RWA_WARN_LIMIT:
        warnings.warn(
            f"k*delta*t*<N>^2 = {p.k * p.delta * abs(t) * nbar ** 2:.3g}: "
            "dropped k*delta terms may matter",
            RwaAccuracyWarning,
            stacklevel=2,
        )
    n = np.arange(trunc.dim, dtype=float)
    kerr = np.exp(-6j * t * p.delta * n**2)
    up = _displacement_cached(s.displacement, trunc) @ (kerr * coherent_ket(s.alpha_up_tilde, trunc))
    down = _displacement_cached(-s.displacement, trunc) @ (
        kerr * coherent_ket(s.alpha_down_tilde, trunc)
    )
    return hybrid_ket(up, down) / np.sqrt(2)
