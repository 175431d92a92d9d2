"""Command-line harness.

Subcommands:
    run <config-file> [--scale=desk|paper] [--out DIR]
    preset <fig1..fig8> [--scale=desk|paper] [--out DIR] [--show]
    validate <config-file>
    dump-problem <config-file> [--out DIR]
    phase <csv> --early A:B --late C:D [--column NAME] [--margin X]

Exit codes: 0 success, 1 config error, 2 divergence, 3 I/O error.
The EIGENSGD_OUTDIR environment variable overrides the output directory.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from .config import ConfigError, parse_config, with_overrides
from .csvio import read_csv
from .experiment import build_from_config, config_warnings, run_experiment
from .phase import detect_phase_transition
from .presets import PRESET_NAMES, SCALES, preset
from .solvers import DivergenceError, EnsembleDivergenceError

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_DIVERGENCE = 2
EXIT_IO = 3


def _build_parser():
    ap = argparse.ArgumentParser(prog="eigensgd",
                                 description="Eigencomponent convergence experiments "
                                             "for SGD/GD/Kaczmarz on synthetic least squares")
    sub = ap.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run an experiment from a config file")
    run_p.add_argument("config")
    run_p.add_argument("--scale", choices=SCALES, default="desk",
                       help="accepted for symmetry with presets; configs are run as written")
    run_p.add_argument("--out", default=None, help="output directory override")

    pre_p = sub.add_parser("preset", help="run a built-in preset")
    pre_p.add_argument("name", choices=PRESET_NAMES)
    pre_p.add_argument("--scale", choices=SCALES, default="desk")
    pre_p.add_argument("--out", default=None)
    pre_p.add_argument("--show", action="store_true",
                       help="print the expanded config instead of running it")

    val_p = sub.add_parser("validate", help="parse a config and print diagnostics")
    val_p.add_argument("config")

    dump_p = sub.add_parser("dump-problem",
                            help="write A, b, sigma, x_star of the configured problem as CSV")
    dump_p.add_argument("config")
    dump_p.add_argument("--out", default=None)

    ph_p = sub.add_parser("phase", help="fit log-log slopes on two windows of a CSV series")
    ph_p.add_argument("csv")
    ph_p.add_argument("--early", required=True, metavar="A:B")
    ph_p.add_argument("--late", required=True, metavar="C:D")
    ph_p.add_argument("--column", default="norm_sq")
    ph_p.add_argument("--margin", type=float, default=0.1)
    return ap


def _read_config_file(path):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        print(f"error: cannot read {path}: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_IO)
    return parse_config(text)


def _window(spec):
    lo, _, hi = spec.partition(":")
    return float(lo), float(hi)


def _run(cfg, out):
    result = run_experiment(cfg, out_dir=out)
    for w in result.warnings:
        print(f"warning: {w}")
    for kind, path in result.files.items():
        print(f"{kind}: {path}")
    return EXIT_OK


def _cmd_validate(args):
    cfg = _read_config_file(args.config)
    _, consts, _ = build_from_config(cfg)
    warnings = config_warnings(cfg, consts)
    print("config OK")
    for w in warnings:
        print(f"warning: {w}")
    return EXIT_OK


def _cmd_dump_problem(args):
    cfg = _read_config_file(args.config)
    p, _, _ = build_from_config(cfg)
    out = os.environ.get("EIGENSGD_OUTDIR") or args.out or cfg.outputs
    os.makedirs(out, exist_ok=True)
    for name, arr in (("A", p.a), ("b", p.b), ("sigma", p.sigma), ("x_star", p.x_star)):
        path = os.path.join(out, f"{name}.csv")
        np.savetxt(path, np.atleast_2d(arr) if arr.ndim == 1 else arr,
                   delimiter=",", fmt="%.17g")
        print(f"{name}: {path}")
    return EXIT_OK


def _cmd_phase(args):
    try:
        meta, columns = read_csv(args.csv)
    except OSError as exc:
        print(f"error: cannot read {args.csv}: {exc}", file=sys.stderr)
        return EXIT_IO
    if args.column not in columns:
        raise ConfigError(f"column {args.column!r} not in {args.csv} "
                          f"(available: {', '.join(columns)})")
    report = detect_phase_transition(columns["iter"], columns[args.column],
                                     _window(args.early), _window(args.late),
                                     margin=args.margin)
    print(f"slope_early: {report.slope_early:.6f}")
    print(f"slope_late: {report.slope_late:.6f}")
    print(f"transition_detected: {str(report.transition_detected).lower()}")
    return EXIT_OK


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return _run(_read_config_file(args.config), args.out)
        if args.command == "preset":
            cfg = preset(args.name, args.scale)
            if args.show:
                from .config import config_to_text
                print(config_to_text(cfg), end="")
                return EXIT_OK
            return _run(cfg, args.out)
        if args.command == "validate":
            return _cmd_validate(args)
        if args.command == "dump-problem":
            return _cmd_dump_problem(args)
        if args.command == "phase":
            return _cmd_phase(args)
        raise AssertionError("unreachable")
    except SystemExit as exc:
        if isinstance(exc.code, int):
            return exc.code
        raise
    except (ConfigError, ValueError, IndexError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (DivergenceError, EnsembleDivergenceError) as exc:
        print(f"divergence: {exc}", file=sys.stderr)
        return EXIT_DIVERGENCE
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
