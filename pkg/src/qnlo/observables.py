"""Entanglement, reduced states, phase-space and squeezing diagnostics.

States follow the layout of :mod:`qnlo.fock`: hybrid kets of length
``2*d`` or hybrid density matrices of shape ``(2*d, 2*d)``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import GridMismatch, GridTooCoarse, NonHermitianInput

MAX_GRID_STEP = 0.25
PLATEAU_WINDOW = 2 * np.pi
PLATEAU_SPREAD = 0.05


def _as_density(state: np.ndarray) -> np.ndarray:
    state = np.asarray(state)
    if state.ndim == 1:
        return np.outer(state, state.conj())
    return state


def _blocks(state: np.ndarray) -> np.ndarray:
    """Density matrix reshaped to ``(2, d, 2, d)``."""
    rho = _as_density(state)
    d = rho.shape[0] // 2
    return rho.reshape(2, d, 2, d)


def partial_transpose_qubit(rho: np.ndarray) -> np.ndarray:
    d2 = rho.shape[0]
    return rho.reshape(2, d2 // 2, 2, d2 // 2).transpose(2, 1, 0, 3).reshape(d2, d2)


def negativity(state: np.ndarray, normalized: bool = False, herm_tol: float = 1e-10) -> float:
    """Negativity ``1/2 sum(|l| - l)`` over eigenvalues of the partial transpose.

    Kets are promoted to projectors. The raw value is at most 1/2 for a
    qubit; ``normalized=True`` returns twice that, so maximal entanglement
    reads 1.
    """
    rho = _as_density(state)
    scale = max(np.max(np.abs(rho)), 1e-300)
    if np.max(np.abs(rho - rho.conj().T)) > herm_tol * max(scale, 1.0):
        raise NonHermitianInput("state is not Hermitian")
    ev = np.linalg.eigvalsh(partial_transpose_qubit(rho))
    raw = max(0.5 * float(np.sum(np.abs(ev) - ev)), 0.0)
    return 2 * raw if normalized else raw


def pure_negativity(psi: np.ndarray, normalized: bool = False) -> float:
    """Negativity of a normalized ket from its Schmidt coefficients.

    For a pure qubit-oscillator state the partial-transpose route reduces
    to ``sqrt(det rho_qubit)``; this is the cheap path for long sweeps.
    """
    rq = reduce_qubit(psi)
    raw = float(np.sqrt(max(np.linalg.det(rq).real, 0.0)))
    return 2 * raw if normalized else raw


def reduce_qubit(state: np.ndarray) -> np.ndarray:
    """2x2 reduced density matrix ``Tr_osc rho``."""
    state = np.asarray(state)
    if state.ndim == 1:
        m = state.reshape(2, -1)
        return m @ m.conj().T
    return np.einsum("ajbj->ab", _blocks(state))


def reduce_osc(state: np.ndarray) -> np.ndarray:
    """Oscillator reduced density matrix ``Tr_q rho``."""
    state = np.asarray(state)
    if state.ndim == 1:
        m = state.reshape(2, -1)
        return m.T @ m.conj()
    return np.einsum("aiaj->ij", _blocks(state))


def bloch_vector(state: np.ndarray) -> np.ndarray:
    """``(<sx>, <sy>, <sz>)`` of the reduced qubit state."""
    r = reduce_qubit(state)
    c = r[0, 1]
    return np.array([2 * c.real, -2 * c.imag, (r[0, 0] - r[1, 1]).real])


def conditioned_osc(state: np.ndarray, branch: str, normalize: bool = False) -> np.ndarray:
    """Oscillator block ``<q| rho |q>`` for ``branch`` in ``{'up', 'down'}``.

    Unnormalized by default, so the two traces add up to one.
    """
    q = {"up": 0, "down": 1}[branch]
    state = np.asarray(state)
    if state.ndim == 1:
        v = state.reshape(2, -1)[q]
        out = np.outer(v, v.conj())
    else:
        out = _blocks(state)[q, :, q, :].copy()
    if normalize:
        out = out / np.trace(out).real
    return out


# -- Wigner function ----------------------------------------------------------


@dataclass(frozen=True)
class WignerGrid:
    """Wigner function sampled on ``values[iy, ix]`` over ``(x_axis, y_axis)``.

    Convention ``alpha-plane``: the point (x, y) is the coherent amplitude
    x + iy, so |alpha0> peaks at (Re alpha0, Im alpha0) and the vacuum has
    W(0, 0) = 2/pi. Normalized so that the integral over dx dy is Tr rho.
    """

    x_axis: np.ndarray
    y_axis: np.ndarray
    values: np.ndarray
    convention: str = "alpha-plane"

    @property
    def dx(self) -> float:
        return float(self.x_axis[1] - self.x_axis[0])

    @property
    def dy(self) -> float:
        return float(self.y_axis[1] - self.y_axis[0])

    def integral(self) -> float:
        return float(self.values.sum() * self.dx * self.dy)

    def same_grid(self, other: "WignerGrid") -> bool:
        return (
            self.convention == other.convention
            and self.x_axis.shape == other.x_axis.shape
            and self.y_axis.shape == other.y_axis.shape
            and np.allclose(self.x_axis, other.x_axis, rtol=0, atol=1e-12)
            and np.allclose(self.y_axis, other.y_axis, rtol=0, atol=1e-12)
        )


def default_axis(half_width: float = 6.0, step: float = 0.1) -> np.ndarray:
    n = int(round(2 * half_width / step)) + 1
    return np.linspace(-half_width, half_width, n)


def axis_for(rho: np.ndarray, step: float = 0.1, cutoff: float = 1e-12) -> np.ndarray:
    """Symmetric axis wide enough for every Fock level above ``cutoff``."""
    m_dim = _support(np.asarray(rho), cutoff)
    return default_axis(max(6.0, np.ceil(np.sqrt(m_dim) + 3.0)), step)


def _support(rho: np.ndarray, tol: float) -> int:
    """Number of leading Fock levels holding every population above ``tol``."""
    pops = np.abs(np.diag(rho))
    idx = np.nonzero(pops > tol)[0]
    return int(idx[-1]) + 1 if idx.size else 1


def _hermite_combos(coef: np.ndarray, x: np.ndarray) -> np.ndarray:
    """``sum_n coef[n, k] phi_n(x)`` for every column ``k``.

    ``phi_n`` are the oscillator eigenfunctions in the quadrature
    ``q = (a + a^dag)/sqrt(2)``, built by their normalized three-term
    recurrence, which stays bounded for all n and x.
    """
    p_prev = np.zeros_like(x)
    p = np.pi**-0.25 * np.exp(-0.5 * x * x)
    out = np.multiply.outer(coef[0], p)
    for n in range(1, coef.shape[0]):
        p_prev, p = p, np.sqrt(2.0 / n) * x * p - np.sqrt((n - 1) / n) * p_prev
        out += np.multiply.outer(coef[n], p)
    return out


def wigner(rho: np.ndarray, x_axis=None, y_axis=None, cutoff: float = 1e-12) -> WignerGrid:
    """Wigner function of an oscillator operator on an alpha-plane grid.

    Computes the displaced-parity expectation
    ``W(beta) = (2/pi) Tr[rho D(beta) P D(beta)^dag]`` through its
    position-kernel form

        W = (2/pi) int <q+s| rho |q-s> e^{-2 i p s} ds,  q + ip = sqrt(2) beta

    with ``rho`` split into eigenvectors and each eigenvector evaluated on
    the quadrature line. Fock levels above the last one with population
    over ``cutoff`` are dropped. Without axes the grid is sized by
    :func:`axis_for`.
    """
    rho = np.asarray(rho)
    if np.max(np.abs(rho - rho.conj().T)) > 1e-10 * max(np.max(np.abs(rho)), 1.0):
        raise NonHermitianInput("oscillator operator is not Hermitian")
    x_axis = axis_for(rho, cutoff=cutoff) if x_axis is None else np.asarray(x_axis, dtype=float)
    y_axis = x_axis if y_axis is None else np.asarray(y_axis, dtype=float)
    for ax in (x_axis, y_axis):
        if len(ax) > 1 and np.max(np.diff(ax)) > MAX_GRID_STEP:
            raise GridTooCoarse(f"grid step {np.max(np.diff(ax)):.3g} > {MAX_GRID_STEP}")
    m_dim = _support(rho, cutoff)
    lam, vec = np.linalg.eigh(rho[:m_dim, :m_dim])
    keep = np.abs(lam) > 1e-14 * max(np.max(np.abs(lam)), 1e-300)
    lam, vec = lam[keep], vec[:, keep]

    q = np.sqrt(2.0) * x_axis
    p = np.sqrt(2.0) * y_axis
    # the kernel is band limited by the top Fock level and by the largest p
    reach = np.sqrt(2.0 * m_dim + 1.0)
    s_max = reach + 8.0
    ds = min(0.05, np.pi / (4.0 * reach + 2.0 * np.max(np.abs(p)) + 8.0))
    s = np.arange(-s_max, s_max + ds / 2, ds)
    phase = np.exp(-2j * np.outer(s, p)) * ds

    w = np.empty((len(y_axis), len(x_axis)))
    chunk = max(1, 400_000 // (len(s) * max(len(lam), 1)))
    for lo in range(0, len(q), chunk):
        qs = q[lo:lo + chunk, None]
        left = _hermite_combos(vec, qs + s)               # (k, nq, ns)
        right = _hermite_combos(vec.conj(), qs - s)
        kern = np.einsum("k,kqs,kqs->qs", lam, left, right)
        w[:, lo:lo + chunk] = (kern @ phase).real.T
    return WignerGrid(x_axis, y_axis, w * 2 / np.pi)


def wigner_overlap(w_up: WignerGrid, w_down: WignerGrid) -> float:
    """Phase-space integral of ``W_up * W_down`` on a shared grid."""
    if not w_up.same_grid(w_down):
        raise GridMismatch("Wigner grids differ")
    return float(np.sum(w_up.values * w_down.values) * w_up.dx * w_up.dy)


def conditioned_wigners(
    state: np.ndarray, step: float = 0.1, cutoff: float = 1e-12
) -> tuple[WignerGrid, WignerGrid]:
    """Wigner functions of both qubit-conditioned branches on one shared grid."""
    up = conditioned_osc(state, "up")
    down = conditioned_osc(state, "down")
    ax = axis_for(up + down, step=step, cutoff=cutoff)
    return wigner(up, ax, cutoff=cutoff), wigner(down, ax, cutoff=cutoff)


def wigner_overlap_exact(rho_up: np.ndarray, rho_down: np.ndarray) -> float:
    """Fock-space value of the same integral, ``Tr(rho_up rho_down)/pi``."""
    return float(np.real(np.trace(rho_up @ rho_down)) / np.pi)


# -- squeezing ------------------------------------------------------------------


@dataclass(frozen=True)
class SqueezingRecord:
    """Rotated-quadrature statistics at time ``t``.

    Quadratures ``x_r = (a e^{-i phi} + a^dag e^{i phi})/2`` and
    ``y_r = (a e^{-i phi} - a^dag e^{i phi})/(2i)``; ``phi_star`` minimizes
    Var(y_r). Normalized variances are relative to the coherent value 1/4.
    """

    t: float
    phi_star: float
    var_x_r: float
    var_y_r: float

    @property
    def norm_x(self) -> float:
        return 4 * self.var_x_r

    @property
    def norm_y(self) -> float:
        return 4 * self.var_y_r

    @property
    def product(self) -> float:
        """Normalized uncertainty product, 1 for a coherent state."""
        return self.norm_x * self.norm_y

    @property
    def min_norm_variance(self) -> float:
        return min(self.norm_x, self.norm_y)


def quadrature_covariance(rho: np.ndarray) -> np.ndarray:
    """Symmetrized covariance matrix of ``x = (a + a^dag)/2``, ``y = (a - a^dag)/(2i)``."""
    d = rho.shape[0]
    a = np.diag(np.sqrt(np.arange(1, d)), 1)
    tr = np.trace(rho).real
    ea = np.trace(rho @ a) / tr
    ea2 = np.trace(rho @ a @ a) / tr
    # <a^dag a> from populations; exact in the truncated space
    en = float(np.real(np.diag(rho) @ np.arange(d))) / tr
    # x = (a + a^dag)/2, y = (a - a^dag)/(2i); symmetric moments
    exx = 0.25 * (2 * ea2.real + 2 * en + 1)
    eyy = 0.25 * (-2 * ea2.real + 2 * en + 1)
    exy = 0.5 * ea2.imag
    mx, my = ea.real, ea.imag
    return np.array([[exx - mx * mx, exy - mx * my], [exy - mx * my, eyy - my * my]])


def squeezing_scan(rho: np.ndarray, t: float = 0.0) -> SqueezingRecord:
    """Exact minimizer of Var(y_r) from the quadrature covariance matrix."""
    cov = quadrature_covariance(rho)
    evals, evecs = np.linalg.eigh(cov)
    # Var(y_r) = v^T cov v with v = (-sin phi, cos phi)
    v = evecs[:, 0]
    phi = float(np.arctan2(-v[0], v[1]) % np.pi)
    return SqueezingRecord(t=t, phi_star=phi, var_x_r=float(evals[1]), var_y_r=float(evals[0]))


# -- plateau detection ----------------------------------------------------------


@dataclass(frozen=True)
class PlateauReport:
    """Longest calm window of a negativity series; ``found`` is False when none."""

    found: bool
    t_lo: float = np.nan
    t_hi: float = np.nan
    spread: float = np.nan
    mean: float = np.nan

    @property
    def width(self) -> float:
        return self.t_hi - self.t_lo if self.found else 0.0


def plateau_detect(
    t: np.ndarray,
    values: np.ndarray,
    osc_threshold: float = PLATEAU_SPREAD,
    window: float = PLATEAU_WINDOW,
    relative: bool = False,
) -> PlateauReport:
    """Find the longest stretch where the series holds still at a high level.

    A sample window of length ``window`` is calm when its peak-to-peak
    spread is below the threshold. A run of consecutive calm windows is a
    candidate; its boundaries are the centers of the first and last calm
    window, pushed out to the series ends when the run touches them (so a
    constant series spans the whole range). A candidate is kept only if
    its mean is no lower than the largest earlier value minus the
    threshold, which rejects the troughs of periodic curves. The longest
    surviving stretch wins.

    With ``relative=True`` the threshold is ``osc_threshold`` times the
    series maximum, for curves that saturate far below 1.
    """
    t = np.asarray(t, dtype=float)
    v = np.asarray(values, dtype=float)
    if t.size < 100:
        raise ValueError("need at least 100 samples")
    thr = osc_threshold * float(np.max(np.abs(v))) if relative else osc_threshold
    dt = t[1] - t[0]
    w = min(max(int(round(window / dt)), 1), t.size - 1)
    view = np.lib.stride_tricks.sliding_window_view(v, w + 1)
    calm = (view.max(axis=1) - view.min(axis=1)) < thr  # calm[i] covers samples i..i+w
    prefix_max = np.maximum.accumulate(v)
    last = t.size - 1
    best = PlateauReport(False)
    edges = np.diff(np.concatenate([[0], calm.astype(np.int8), [0]]))
    for start, stop in zip(np.nonzero(edges == 1)[0], np.nonzero(edges == -1)[0]):
        seg = v[start:stop + w]
        mean = float(seg.mean())
        before = prefix_max[start - 1] if start > 0 else -np.inf
        if mean < before - thr:
            continue
        t_lo = t[0] if start == 0 else t[start] + 0.5 * w * dt
        t_hi = t[last] if stop - 1 + w >= last else t[stop - 1] + 0.5 * w * dt
        if not best.found or t_hi - t_lo > best.width:
            best = PlateauReport(True, float(t_lo), float(t_hi),
                                 float(seg.max() - seg.min()), mean)
    return best
