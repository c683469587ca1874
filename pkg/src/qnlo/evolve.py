"""Time propagation: exact unitary evolution and a Lindblad integrator."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

from .errors import EigensolveFailure, StepSizeUnderflow, TruncationBreached
from .fock import FockTruncation, check_truncation, fock_populations
from .hamiltonians import VALIDITY_LIMIT, ScaledParams

log = logging.getLogger(__name__)

SAMPLES_PER_CYCLE = 400

Observable = Callable[[np.ndarray], float]


@dataclass(frozen=True)
class TimeGrid:
    """Uniform sample times in units of the inverse oscillator frequency."""

    t_start: float
    t_end: float
    n_samples: int

    def __post_init__(self):
        if not self.t_end > self.t_start:
            raise ValueError("t_end must exceed t_start")
        if self.n_samples < 2:
            raise ValueError("need at least two samples")

    @classmethod
    def cycles(cls, t_end: float, t_start: float = 0.0, per_cycle: int = SAMPLES_PER_CYCLE):
        """Grid with ``per_cycle`` intervals per 2*pi of evolution."""
        n = int(round((t_end - t_start) / (2 * np.pi) * per_cycle)) + 1
        return cls(t_start, t_end, max(n, 2))

    @property
    def times(self) -> np.ndarray:
        return np.linspace(self.t_start, self.t_end, self.n_samples)

    @property
    def dt(self) -> float:
        return (self.t_end - self.t_start) / (self.n_samples - 1)


@dataclass
class EvolutionResult:
    """Sampled trajectory.

    ``states`` is ``(n_samples, dim)`` for kets or ``(n_samples, dim, dim)``
    for density matrices, or ``None`` when states were not stored.
    ``diagnostics`` holds per-sample arrays: ``norm_drift`` (|norm - 1| or
    |trace - 1|), ``tail`` (guard-band population) and ``mean_n``.
    ``observables`` holds per-sample values of the requested callables.
    """

    grid: TimeGrid
    states: np.ndarray | None
    diagnostics: dict[str, np.ndarray]
    observables: dict[str, np.ndarray] = field(default_factory=dict)

    @property
    def times(self) -> np.ndarray:
        return self.grid.times


@dataclass(frozen=True)
class ValidityReport:
    max_metric: float
    limit: float
    passed: bool


def _record(state, trunc, n_levels, vec):
    pops = fock_populations(state, n_levels)
    tail = check_truncation(state, trunc).tail if trunc is not None else 0.0
    if vec:
        drift = abs(np.vdot(state, state).real - 1.0)
    else:
        drift = abs(np.trace(state).real - 1.0)
    return drift, tail, float(pops @ np.arange(n_levels))


def _diagnose(states_iter, times, trunc, n_levels, vec, observables, store):
    n = len(times)
    diag = {k: np.empty(n) for k in ("norm_drift", "tail", "mean_n")}
    obs = {name: np.empty(n) for name in observables}
    kept = []
    for i, (t, s) in enumerate(zip(times, states_iter)):
        drift, tail, mean_n = _record(s, trunc, n_levels, vec)
        diag["norm_drift"][i] = drift
        diag["tail"][i] = tail
        diag["mean_n"][i] = mean_n
        if trunc is not None and tail > trunc.tail_tol:
            raise TruncationBreached(
                f"guard-band population {tail:.3g} > {trunc.tail_tol:.3g} at t={t:.6g}; "
                "increase n_max",
                tail=tail,
                time=t,
            )
        for name, fn in observables.items():
            obs[name][i] = fn(s)
        if store:
            kept.append(s)
    states = np.array(kept) if store else None
    return states, diag, obs


class UnitaryPropagator:
    """``exp(-i H t)`` from one Hermitian eigendecomposition of ``H``."""

    def __init__(self, h: np.ndarray):
        try:
            self.energies, self.vectors = np.linalg.eigh(h)
        except np.linalg.LinAlgError as exc:
            raise EigensolveFailure(str(exc)) from exc
        if not np.all(np.isfinite(self.energies)):
            raise EigensolveFailure("non-finite eigenvalues")

    def __call__(self, psi0: np.ndarray, t: float) -> np.ndarray:
        c = self.vectors.conj().T @ psi0
        return self.vectors @ (np.exp(-1j * self.energies * t) * c)

    def iter_states(self, psi0: np.ndarray, times: np.ndarray, chunk: int = 512):
        c = self.vectors.conj().T @ psi0
        for lo in range(0, len(times), chunk):
            ts = times[lo:lo + chunk]
            block = self.vectors @ (np.exp(-1j * np.outer(self.energies, ts)) * c[:, None])
            yield from block.T


def evolve_unitary(
    h: np.ndarray,
    psi0: np.ndarray,
    grid: TimeGrid,
    trunc: FockTruncation | None = None,
    observables: Mapping[str, Observable] | None = None,
    store_states: bool = True,
) -> EvolutionResult:
    """Evolve a ket under a time-independent Hermitian ``h``.

    With ``trunc`` given, every sample is certified against the guard band
    and :class:`TruncationBreached` is raised on the first failure.
    """
    observables = dict(observables or {})
    n_levels = psi0.shape[0] // 2
    prop = UnitaryPropagator(h)
    if trunc is not None:
        _check_start(psi0, trunc)
    states, diag, obs = _diagnose(
        prop.iter_states(psi0, grid.times), grid.times, trunc, n_levels, True,
        observables, store_states,
    )
    return EvolutionResult(grid, states, diag, obs)


def _check_start(state, trunc):
    rep = check_truncation(state, trunc)
    if not rep.passed:
        raise TruncationBreached(
            f"initial state not certified: tail {rep.tail:.3g}", tail=rep.tail, time=0.0
        )


# Dormand-Prince 5(4) tableau
_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_B = np.array([35 / 384, 0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0])
_E = _B - np.array([5179 / 57600, 0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40])


@dataclass(frozen=True)
class StepControl:
    rtol: float = 1e-8
    atol: float = 1e-10
    first_step: float | None = None
    max_step: float = np.inf
    min_step: float = 1e-12


def _dp45_step(f, y, h, k1):
    ks = [k1]
    for i in range(1, 7):
        acc = y.copy()
        for a, k in zip(_A[i], ks):
            if a:
                acc += (h * a) * k
        ks.append(f(acc))
    # the seventh stage is evaluated at the fifth-order solution (FSAL)
    y_new = y + h * sum(b * k for b, k in zip(_B, ks) if b)
    err = h * sum(e * k for e, k in zip(_E, ks) if e)
    return y_new, err, ks[-1]


def evolve_lindblad(
    gen: Callable[[np.ndarray], np.ndarray],
    rho0: np.ndarray,
    grid: TimeGrid,
    step_ctrl: StepControl = StepControl(),
    trunc: FockTruncation | None = None,
    observables: Mapping[str, Observable] | None = None,
    store_states: bool = True,
) -> EvolutionResult:
    """Integrate ``d rho/dt = gen(rho)`` with adaptive Dormand-Prince 5(4).

    Steps are clipped to land on every sample time. After each accepted
    step the state is re-symmetrized to ``(rho + rho^dag)/2``.
    """
    observables = dict(observables or {})
    times = grid.times
    n_levels = rho0.shape[0] // 2
    if trunc is not None:
        _check_start(rho0, trunc)

    def trajectory():
        rho = np.array(rho0, dtype=complex)
        t = times[0]
        h = step_ctrl.first_step or (abs(times[-1]) or 1.0) * 1e-4
        k1 = gen(rho)
        yield rho.copy()
        n_acc = n_rej = 0
        for t_next in times[1:]:
            while t < t_next:
                h = min(h, step_ctrl.max_step)
                clipped = t + h >= t_next
                h_try = t_next - t if clipped else h
                if h_try < step_ctrl.min_step * max(1.0, abs(t)):
                    raise StepSizeUnderflow(f"step {h_try:.3g} at t={t:.6g}")
                y_new, err, k_end = _dp45_step(gen, rho, h_try, k1)
                scale = step_ctrl.atol + step_ctrl.rtol * np.maximum(np.abs(rho), np.abs(y_new))
                en = float(np.max(np.abs(err) / scale))
                if en <= 1.0:
                    t = t_next if clipped else t + h_try
                    rho = 0.5 * (y_new + y_new.conj().T)
                    # gen is linear and maps Hermitian to Hermitian
                    k1 = 0.5 * (k_end + k_end.conj().T)
                    n_acc += 1
                    grow = 5.0 if en == 0 else min(5.0, 0.9 * en ** -0.2)
                    if h_try >= h:
                        h = h_try * grow
                else:
                    n_rej += 1
                    h = h_try * max(0.2, 0.9 * en ** -0.25)
            yield rho.copy()
        log.debug("lindblad: %d accepted, %d rejected steps", n_acc, n_rej)

    states, diag, obs = _diagnose(
        trajectory(), times, trunc, n_levels, False, observables, store_states
    )
    return EvolutionResult(grid, states, diag, obs)


def validity_monitor(result: EvolutionResult, p: ScaledParams) -> ValidityReport:
    """Largest ``delta * <N>`` seen along the run."""
    metric = float(p.delta * np.max(result.diagnostics["mean_n"]))
    return ValidityReport(metric, VALIDITY_LIMIT, metric <= VALIDITY_LIMIT)
