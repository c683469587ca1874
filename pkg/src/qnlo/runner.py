"""Execute a :class:`RunConfig` and serialize the results."""
from __future__ import annotations

import json
import os
import time
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .analytic import RwaAccuracyWarning, linear_state, rwa_state
from .config import ANALYTIC_MODELS, RunConfig, config_items, dump_config
from .errors import TruncationBreached
from .evolve import StepControl, TimeGrid, UnitaryPropagator, evolve_lindblad, evolve_unitary
from .fock import check_truncation, initial_state, ket_to_density
from .hamiltonians import build_hamiltonian, build_lindblad_generator
from .observables import (
    WignerGrid,
    axis_for,
    bloch_vector,
    conditioned_osc,
    negativity,
    pure_negativity,
    plateau_detect,
    reduce_osc,
    reduce_qubit,
    squeezing_scan,
    wigner,
    wigner_overlap,
    wigner_overlap_exact,
)
from .plots import plot_script

OUT_ENV = "QNLO_OUT_DIR"
DEFAULT_OUT = "qnlo-out"


@dataclass
class ResultBundle:
    """Everything one run produces.

    ``series`` maps a name to ``(t_over_pi, values)``; ``grids`` maps a
    name to a :class:`WignerGrid`. ``metadata`` holds the config echo and
    code version (deterministic); ``wall_time`` is kept apart so that data
    files stay byte-identical across reruns.
    """

    config: RunConfig
    metadata: dict[str, str]
    series: dict[str, tuple[np.ndarray, np.ndarray]] = field(default_factory=dict)
    grids: dict[str, WignerGrid] = field(default_factory=dict)
    summary: dict[str, float | bool | str] = field(default_factory=dict)
    wall_time: float = 0.0


def _multi(fn, keys):
    """Per-key scalar callables sharing one evaluation per state."""
    memo = {}

    def getter(key):
        def f(state):
            if memo.get("state") is not state:
                memo["state"] = state
                memo["value"] = fn(state)
            return memo["value"][key]
        return f

    return {key: getter(key) for key in keys}


def _negativity(state):
    # kets take the two-term Schmidt shortcut; the full partial transpose is
    # reserved for density matrices
    if state.ndim == 1:
        return pure_negativity(state, normalized=True)
    return negativity(state, normalized=True)


def _squeeze(state):
    r = squeezing_scan(reduce_osc(state))
    return {
        "sq_min_variance": r.min_norm_variance,
        "sq_product": r.product,
        "sq_phi_star": r.phi_star,
        "sq_var_x": r.norm_x,
        "sq_var_y": r.norm_y,
    }


def _bloch(state):
    v = bloch_vector(state)
    return {"bloch_x": v[0], "bloch_y": v[1], "bloch_z": v[2]}


def _observables(cfg: RunConfig) -> dict:
    obs = {}
    want = set(cfg.observables)
    if "negativity" in want:
        obs["negativity"] = _negativity
    if "coherence" in want:
        obs["coherence"] = lambda s: float(abs(reduce_qubit(s)[0, 1]))
    if "bloch" in want:
        obs.update(_multi(_bloch, ("bloch_x", "bloch_y", "bloch_z")))
    if "squeezing" in want:
        obs.update(_multi(_squeeze, ("sq_min_variance", "sq_product", "sq_phi_star",
                                     "sq_var_x", "sq_var_y")))
    return obs


def _analytic_state(cfg, t):
    p, trunc = cfg.params, cfg.truncation
    if cfg.model == "linear-analytic":
        return linear_state(p, t, trunc)
    return rwa_state(p, t, trunc)


def _analytic_series(cfg, grid, obs):
    trunc = cfg.truncation
    times = grid.times
    values = {name: np.empty(len(times)) for name in obs}
    mean_n = np.empty(len(times))
    tail = np.empty(len(times))
    n = np.tile(np.arange(trunc.dim), 2)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", RwaAccuracyWarning)
        for i, t in enumerate(times):
            s = _analytic_state(cfg, t)
            for name, fn in obs.items():
                values[name][i] = fn(s)
            mean_n[i] = float(np.abs(s) ** 2 @ n)
            tail[i] = check_truncation(s, trunc).tail
    if caught:
        # one report per run instead of one per sample
        first = caught[0]
        warnings.warn(f"{first.message} (from t={times[len(times) - len(caught)]:.4g} on)",
                      first.category, stacklevel=2)
    return values, {"mean_n": mean_n, "tail": tail}


def _state_at(cfg, t, prop, psi0):
    if cfg.model in ANALYTIC_MODELS:
        return _analytic_state(cfg, t)
    s = prop(psi0, t)
    rep = check_truncation(s, cfg.truncation)
    if cfg.certify and not rep.passed:
        raise TruncationBreached(
            f"guard-band population {rep.tail:.3g} > {cfg.tail_tol:.3g} at t={t:.6g}; "
            "increase n_max", tail=rep.tail, time=t,
        )
    return s


def _wigner_outputs(cfg, bundle, prop, psi0):
    w_t, w_p, w_p_exact = [], [], []
    for tp in cfg.wigner_times_pi:
        s = _state_at(cfg, tp * np.pi, prop, psi0)
        tag = f"t{tp:g}pi"
        if "wigner" in cfg.observables:
            rho = reduce_osc(s)
            bundle.grids[f"wigner_{tag}"] = wigner(rho, axis_for(rho, cfg.wigner_step))
        if "conditioned_wigner" in cfg.observables:
            up, down = conditioned_osc(s, "up"), conditioned_osc(s, "down")
            ax = axis_for(up + down, cfg.wigner_step)
            wu, wd = wigner(up, ax), wigner(down, ax)
            bundle.grids[f"wigner_up_{tag}"] = wu
            bundle.grids[f"wigner_down_{tag}"] = wd
            w_t.append(tp)
            w_p.append(wigner_overlap(wu, wd))
            w_p_exact.append(wigner_overlap_exact(up, down))
    if w_t:
        bundle.series["w_p"] = (np.array(w_t), np.array(w_p))
        bundle.series["w_p_exact"] = (np.array(w_t), np.array(w_p_exact))


def run_experiment(cfg: RunConfig) -> ResultBundle:
    """Evolve, measure and collect; nothing is written to disk here."""
    start = time.perf_counter()
    p, trunc = cfg.params, cfg.truncation
    grid = TimeGrid.cycles(cfg.t_end, per_cycle=cfg.samples)
    obs = _observables(cfg)
    meta = {"code_version": __version__, "time_unit": "pi", **dict(config_items(cfg))}
    bundle = ResultBundle(cfg, meta)
    guard = trunc if cfg.certify else None

    psi0 = initial_state(p.alpha, trunc)
    prop = None
    if cfg.model in ANALYTIC_MODELS:
        values, diag = _analytic_series(cfg, grid, obs)
    else:
        h = build_hamiltonian(cfg.model, p, trunc)
        if cfg.gamma > 0:
            res = evolve_lindblad(
                build_lindblad_generator(p, h), ket_to_density(psi0), grid,
                StepControl(rtol=cfg.rtol, atol=cfg.atol), trunc=guard,
                observables=obs, store_states=False,
            )
        else:
            res = evolve_unitary(h, psi0, grid, trunc=guard, observables=obs,
                                 store_states=False)
            if cfg.wigner_times_pi:
                prop = UnitaryPropagator(h)
        values, diag = res.observables, res.diagnostics

    t_pi = grid.times / np.pi
    for name, v in values.items():
        bundle.series[name] = (t_pi, v)
    if "mean_n" in cfg.observables:
        bundle.series["mean_n"] = (t_pi, diag["mean_n"])
    bundle.summary["max_tail"] = float(np.max(diag["tail"]))
    bundle.summary["max_delta_n"] = float(cfg.delta * np.max(diag["mean_n"]))
    if cfg.wigner_times_pi:
        _wigner_outputs(cfg, bundle, prop, psi0)
    if "plateau" in cfg.observables:
        rep = plateau_detect(grid.times, values["negativity"], cfg.plateau_threshold,
                             relative=cfg.plateau_relative)
        bundle.summary.update({
            "plateau_found": rep.found,
            "plateau_t_lo_pi": rep.t_lo / np.pi if rep.found else float("nan"),
            "plateau_t_hi_pi": rep.t_hi / np.pi if rep.found else float("nan"),
            "plateau_width": rep.width,
            "plateau_spread": rep.spread,
        })
    bundle.wall_time = time.perf_counter() - start
    return bundle


def output_root(out: str | os.PathLike | None = None) -> Path:
    """Explicit path, else ``$QNLO_OUT_DIR``, else ``./qnlo-out``."""
    return Path(out or os.environ.get(OUT_ENV) or DEFAULT_OUT)


def _fmt(x) -> str:
    return repr(float(x))


def _header(meta: dict[str, str]) -> str:
    return "".join(f"# {k}={v}\n" for k, v in meta.items())


def series_csv(meta, t, v) -> str:
    body = "".join(f"{_fmt(a)},{_fmt(b)}\n" for a, b in zip(t, v))
    return _header(meta) + "t,value\n" + body


def grid_csv(meta, g: WignerGrid) -> str:
    xx, yy = np.meshgrid(g.x_axis, g.y_axis)
    rows = "".join(
        f"{_fmt(x)},{_fmt(y)},{_fmt(w)}\n"
        for x, y, w in zip(xx.ravel(), yy.ravel(), g.values.ravel())
    )
    return _header({**meta, "convention": g.convention}) + "x,y,W\n" + rows


def _json_safe(v):
    if isinstance(v, float) and not np.isfinite(v):
        return None
    if isinstance(v, (np.floating, np.bool_)):
        return _json_safe(v.item())
    return v


def write_bundle(bundle: ResultBundle, out: str | os.PathLike | None = None,
                 fmt: str | None = None, emit_plots: bool | None = None) -> Path:
    """Write one run into ``<root>/<name>/`` and return that directory."""
    cfg = bundle.config
    fmt = fmt or cfg.format
    emit_plots = cfg.emit_plots if emit_plots is None else emit_plots
    run_dir = output_root(out or cfg.out_dir or None) / cfg.name
    run_dir.mkdir(parents=True, exist_ok=True)
    (run_dir / "config.toml").write_text(dump_config(cfg))
    meta = bundle.metadata
    if fmt == "csv":
        for name, (t, v) in bundle.series.items():
            (run_dir / f"{name}.csv").write_text(series_csv({**meta, "observable": name}, t, v))
        for name, g in bundle.grids.items():
            (run_dir / f"{name}.csv").write_text(grid_csv({**meta, "observable": name}, g))
    else:
        doc = {
            "metadata": meta,
            "series": {n: {"t": list(map(float, t)), "value": list(map(float, v))}
                       for n, (t, v) in bundle.series.items()},
            "grids": {n: {"x": g.x_axis.tolist(), "y": g.y_axis.tolist(),
                          "W": g.values.tolist(), "convention": g.convention}
                      for n, g in bundle.grids.items()},
        }
        (run_dir / "results.json").write_text(json.dumps(doc, indent=1) + "\n")
    summary = {k: _json_safe(v) for k, v in bundle.summary.items()}
    summary["wall_time_s"] = round(bundle.wall_time, 3)
    (run_dir / "summary.json").write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    if emit_plots and fmt == "csv":
        for name in bundle.series:
            (run_dir / f"plot_{name}.py").write_text(plot_script(f"{name}.csv", f"{name}.svg", name))
    return run_dir
