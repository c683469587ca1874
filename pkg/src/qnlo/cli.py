"""``qnlo`` command line: run configs and figure presets.

Exit codes: 0 success, 2 configuration error, 3 truncation breach,
4 any other numerical failure.
"""
from __future__ import annotations

import argparse
import logging
import sys

from .config import FORMATS, parse_config, validate_config
from .errors import ConfigError, QnloError, TruncationBreached
from .presets import get_preset, preset_registry
from .runner import OUT_ENV, output_root, run_experiment, write_bundle

EXIT_OK, EXIT_CONFIG, EXIT_TRUNCATION, EXIT_NUMERICAL = 0, 2, 3, 4

log = logging.getLogger("qnlo")


def _overrides(args) -> dict:
    out = {}
    if args.n_max is not None:
        out["n_max"] = args.n_max
    if args.t_end_pi is not None:
        out["t_end_pi"] = args.t_end_pi
    if args.samples is not None:
        out["samples"] = args.samples
    if args.format is not None:
        out["format"] = args.format
    if args.emit_plots:
        out["emit_plots"] = True
    return out


def _run_all(configs, args) -> int:
    over = _overrides(args)
    for cfg in configs:
        cfg = cfg.replace(**over) if over else cfg
        log.info("running %s (model=%s, t_end=%g pi)", cfg.name, cfg.model, cfg.t_end_pi)
        bundle = run_experiment(cfg)
        path = write_bundle(bundle, out=args.out)
        print(f"{cfg.name}: wrote {path} ({bundle.wall_time:.1f} s)")
    return EXIT_OK


def _read(path) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from exc


def cmd_run(args) -> int:
    return _run_all([parse_config(_read(args.config))], args)


def cmd_preset(args) -> int:
    try:
        preset = get_preset(args.name)
    except KeyError as exc:
        raise ConfigError(str(exc.args[0]), field="preset") from None
    root = output_root(args.out) / preset.name
    args.out = str(root)
    return _run_all(preset.runs, args)


def cmd_list(args) -> int:
    for name, preset in preset_registry().items():
        print(f"{name:6s} {len(preset.runs)} run(s)  {preset.description}")
    return EXIT_OK


def cmd_validate(args) -> int:
    cfg, msgs = validate_config(_read(args.config))
    for m in msgs:
        print(f"warning: {m}")
    print(f"ok: {cfg.name} (model={cfg.model})")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help=f"output root (default: ${OUT_ENV} or ./qnlo-out)")
    common.add_argument("--n-max", type=int, help="override the Fock cutoff")
    common.add_argument("--t-end-pi", type=float, help="override the final time, units of pi")
    common.add_argument("--samples", type=int, help="override samples per 2 pi")
    common.add_argument("--format", choices=FORMATS, help="output format")
    common.add_argument("--emit-plots", action="store_true", help="write SVG plot scripts")

    p = argparse.ArgumentParser(prog="qnlo", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", parents=[common], help="run a TOML config")
    r.add_argument("config")
    r.set_defaults(func=cmd_run)
    s = sub.add_parser("preset", parents=[common], help="run a figure preset")
    s.add_argument("name")
    s.set_defaults(func=cmd_preset)
    ls = sub.add_parser("list-presets", help="list figure presets")
    ls.set_defaults(func=cmd_list)
    v = sub.add_parser("validate", help="check a config without running it")
    v.add_argument("config")
    v.set_defaults(func=cmd_validate)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except TruncationBreached as exc:
        print(f"truncation breach: {exc}", file=sys.stderr)
        return EXIT_TRUNCATION
    except (QnloError, ArithmeticError, ValueError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
