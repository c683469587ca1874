"""Run configuration: a flat TOML file with documented defaults.

Every key is optional; an empty file gives the defaults below. Unknown
keys are rejected with the line they appear on.

    name = "run"            label, also the output sub-directory
    model = "full"          full | rwa | ns | two | ladder-full |
                            linear-analytic | rwa-analytic
    k = 0.5                 coupling over oscillator frequency
    delta = 0.0             quartic strength
    alpha = 2.0             initial amplitude, or [re, im]
    gamma = 0.0             damping rate; > 0 switches to the master equation
    n_max = 80              Fock cutoff
    tail_tol = 1e-9         guard-band population allowed
    margin = 5              guard-band width in levels
    certify = true          abort when the guard band is breached
    t_end_pi = 2.0          final time in units of pi
    samples = 400           samples per 2 pi
    observables = ["negativity"]
    wigner_times_pi = []    times (units of pi) for Wigner grids
    wigner_step = 0.1       Wigner grid spacing
    plateau_threshold = 0.05
    plateau_relative = false
    rtol = 1e-8             master-equation step control
    atol = 1e-10
    out_dir = ""            empty: $QNLO_OUT_DIR or ./qnlo-out
    format = "csv"          csv | json
    emit_plots = false
"""
from __future__ import annotations

import dataclasses
import math
import re
import warnings
from dataclasses import dataclass, field

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .errors import ConfigError
from .fock import FockTruncation
from .hamiltonians import ScaledParams, ValidityWarning

MODELS = ("full", "rwa", "ns", "two", "ladder-full", "linear-analytic", "rwa-analytic")
ANALYTIC_MODELS = ("linear-analytic", "rwa-analytic")
OBSERVABLES = (
    "negativity",
    "coherence",
    "bloch",
    "mean_n",
    "squeezing",
    "wigner",
    "conditioned_wigner",
    "plateau",
)
FORMATS = ("csv", "json")


@dataclass(frozen=True)
class RunConfig:
    name: str = "run"
    model: str = "full"
    k: float = 0.5
    delta: float = 0.0
    alpha: complex = 2.0
    gamma: float = 0.0
    n_max: int = 80
    tail_tol: float = 1e-9
    margin: int = 5
    certify: bool = True
    t_end_pi: float = 2.0
    samples: int = 400
    observables: tuple[str, ...] = ("negativity",)
    wigner_times_pi: tuple[float, ...] = ()
    wigner_step: float = 0.1
    plateau_threshold: float = 0.05
    plateau_relative: bool = False
    rtol: float = 1e-8
    atol: float = 1e-10
    out_dir: str = ""
    format: str = "csv"
    emit_plots: bool = False
    notes: str = field(default="", compare=False)

    @property
    def params(self) -> ScaledParams:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ValidityWarning)
            return ScaledParams(k=self.k, delta=self.delta, alpha=self.alpha, gamma=self.gamma)

    @property
    def truncation(self) -> FockTruncation:
        return FockTruncation(self.n_max, self.tail_tol, self.margin)

    @property
    def t_end(self) -> float:
        return self.t_end_pi * math.pi

    def replace(self, **changes) -> "RunConfig":
        return check(dataclasses.replace(self, **changes))


_FIELDS = {f.name: f for f in dataclasses.fields(RunConfig)}


def _line_of(text: str, key: str) -> int | None:
    pat = re.compile(rf"^\s*{re.escape(key)}\s*=")
    for i, line in enumerate(text.splitlines(), 1):
        if pat.match(line):
            return i
    return None


def _coerce(key, value, line):
    def bad(msg):
        return ConfigError(msg, field=key, line=line)

    kind = _FIELDS[key].type
    if kind == "bool":
        if not isinstance(value, bool):
            raise bad(f"expected true/false, got {value!r}")
        return value
    if kind == "int":
        if isinstance(value, bool) or not isinstance(value, int):
            raise bad(f"expected an integer, got {value!r}")
        return value
    if kind == "float":
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise bad(f"expected a number, got {value!r}")
        return float(value)
    if kind == "complex":
        if isinstance(value, list) and len(value) == 2 and all(
            isinstance(v, (int, float)) and not isinstance(v, bool) for v in value
        ):
            return complex(value[0], value[1]) if value[1] else float(value[0])
        if isinstance(value, (int, float)) and not isinstance(value, bool):
            return float(value)
        raise bad(f"expected a number or [re, im], got {value!r}")
    if kind == "str":
        if not isinstance(value, str):
            raise bad(f"expected a string, got {value!r}")
        return value
    if kind == "tuple[str, ...]":
        if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
            raise bad("expected a list of strings")
        return tuple(value)
    if kind == "tuple[float, ...]":
        if not isinstance(value, list) or not all(
            isinstance(v, (int, float)) and not isinstance(v, bool) for v in value
        ):
            raise bad("expected a list of numbers")
        return tuple(float(v) for v in value)
    raise bad(f"unsupported field type {kind}")


def check(cfg: RunConfig, text: str = "") -> RunConfig:
    """Schema and consistency checks; raises :class:`ConfigError`."""

    def fail(key, msg):
        raise ConfigError(msg, field=key, line=_line_of(text, key) if text else None)

    for key in ("k", "delta", "gamma"):
        v = getattr(cfg, key)
        if not math.isfinite(v) or v < 0:
            fail(key, f"must be a finite non-negative number, got {v}")
    if not all(math.isfinite(x) for x in (complex(cfg.alpha).real, complex(cfg.alpha).imag)):
        fail("alpha", "must be finite")
    if cfg.model not in MODELS:
        fail("model", f"unknown model {cfg.model!r}; choose from {', '.join(MODELS)}")
    if cfg.model == "linear-analytic" and cfg.delta != 0:
        fail("delta", "linear-analytic needs delta = 0")
    if cfg.model == "rwa-analytic" and complex(cfg.alpha).imag != 0:
        fail("alpha", "rwa-analytic needs a real alpha")
    if cfg.model in ANALYTIC_MODELS and cfg.gamma > 0:
        fail("gamma", f"{cfg.model} is closed-system only")
    if cfg.n_max < cfg.margin + 1 or cfg.margin < 0:
        fail("n_max", f"n_max={cfg.n_max} must exceed margin={cfg.margin}")
    if not cfg.tail_tol > 0:
        fail("tail_tol", "must be positive")
    if not cfg.t_end_pi > 0:
        fail("t_end_pi", "must be positive")
    if cfg.samples < 2:
        fail("samples", "need at least 2 samples per cycle")
    for obs in cfg.observables:
        if obs not in OBSERVABLES:
            fail("observables", f"unknown observable {obs!r}; choose from {', '.join(OBSERVABLES)}")
    if "plateau" in cfg.observables and "negativity" not in cfg.observables:
        fail("observables", "plateau needs negativity")
    wants_grid = {"wigner", "conditioned_wigner"} & set(cfg.observables)
    if wants_grid and not cfg.wigner_times_pi:
        fail("wigner_times_pi", "Wigner output requested but no times given")
    if wants_grid and cfg.gamma > 0:
        fail("observables", "Wigner grids are only produced for closed-system runs")
    if any(t < 0 for t in cfg.wigner_times_pi):
        fail("wigner_times_pi", "times must be non-negative")
    if not 0 < cfg.wigner_step <= 0.25:
        fail("wigner_step", "must lie in (0, 0.25]")
    if not cfg.plateau_threshold > 0:
        fail("plateau_threshold", "must be positive")
    if not (cfg.rtol > 0 and cfg.atol > 0):
        fail("rtol" if cfg.rtol <= 0 else "atol", "tolerances must be positive")
    if cfg.format not in FORMATS:
        fail("format", f"expected csv or json, got {cfg.format!r}")
    return cfg


def parse_config(text: str) -> RunConfig:
    """Parse TOML text into a checked :class:`RunConfig`."""
    try:
        raw = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        m = re.search(r"line (\d+)", str(exc))
        raise ConfigError(f"not valid TOML: {exc}", line=int(m.group(1)) if m else None) from exc
    values = {}
    for key, value in raw.items():
        line = _line_of(text, key)
        if key not in _FIELDS or key == "notes":
            raise ConfigError("unknown key", field=key, line=line)
        if isinstance(value, dict):
            raise ConfigError("tables are not used; write keys at top level", field=key, line=line)
        values[key] = _coerce(key, value, line)
    return check(RunConfig(**values), text)


def validate_config(text: str) -> tuple[RunConfig, list[str]]:
    """Parse and check; also return physics warnings (validity pre-check)."""
    cfg = parse_config(text)
    msgs = []
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        ScaledParams(k=cfg.k, delta=cfg.delta, alpha=cfg.alpha, gamma=cfg.gamma)
    msgs.extend(str(w.message) for w in caught if issubclass(w.category, ValidityWarning))
    return cfg, msgs


def load_config(path) -> RunConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())


def _toml_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, complex):
        return f"[{v.real!r}, {v.imag!r}]"
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, int):
        return str(v)
    if isinstance(v, str):
        return '"' + v.replace("\\", "\\\\").replace('"', '\\"') + '"'
    if isinstance(v, tuple):
        return "[" + ", ".join(_toml_value(x) for x in v) + "]"
    raise TypeError(type(v))


def dump_config(cfg: RunConfig) -> str:
    """TOML text that parses back to ``cfg``; ``notes`` become comments."""
    lines = [f"# {ln}" for ln in cfg.notes.splitlines()]
    for f in dataclasses.fields(cfg):
        if f.name == "notes":
            continue
        lines.append(f"{f.name} = {_toml_value(getattr(cfg, f.name))}")
    return "\n".join(lines) + "\n"


def config_items(cfg: RunConfig) -> list[tuple[str, str]]:
    """``(key, value)`` pairs for metadata headers, in field order."""
    return [
        (f.name, _toml_value(getattr(cfg, f.name)))
        for f in dataclasses.fields(cfg)
        if f.name not in ("notes", "out_dir")
    ]
