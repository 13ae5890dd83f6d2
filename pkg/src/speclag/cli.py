"""Command line interface.

Subcommands: ``verify``, ``sweep``, ``angle``, ``meancurv``, ``sample``.
Exit status is 0 when every requested check passes, 1 when a check fails
and 2 on usage or configuration errors.
"""

import argparse
import json
import sys

import numpy as np

from .errors import ConfigError, SpecLagError
from .harness import (
    DEFAULT_TOLERANCES,
    meancurv_entry,
    build_family,
    dump_report,
    export_pointcloud,
    load_config,
    run_checks,
    sample_plan,
)
from .verify import angle_constancy, theorem_sweep

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _tol_override(text):
    key, sep, value = text.partition("=")
    if not sep or key not in DEFAULT_TOLERANCES:
        raise argparse.ArgumentTypeError(f"expected NAME=VALUE with NAME in {sorted(DEFAULT_TOLERANCES)}")
    try:
        return key, float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {value!r}") from None


def _int_list(text):
    try:
        return [int(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _grid(text):
    """``"1,1;1,1.5;2,2"`` -> list of a-vectors."""
    try:
        return [[float(v) for v in entry.split(",")] for entry in text.split(";") if entry.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}") from None


def _load(args):
    config = load_config(args.config)
    if getattr(args, "seed", None) is not None:
        config.samples["seed"] = args.seed
    for key, value in getattr(args, "tol", None) or []:
        config.tolerances[key] = value
    return config


def _emit(text, out):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_verify(args):
    report = run_checks(_load(args))
    _emit(dump_report(report), args.out)
    return EXIT_PASS if report["overall_pass"] else EXIT_FAIL


def cmd_sweep(args):
    for a in args.grid:
        if len(a) != args.n:
            raise ConfigError(f"entry {a} has length {len(a)}, expected {args.n}", "grid")
        if min(a) <= 0:
            raise ConfigError(f"entry {a} has a non-positive value", "grid")
    tolerances = dict(args.tol or [])
    rows = theorem_sweep(args.n, args.grid, tolerances, sigma_count=args.sigma_count, seed=args.seed)
    report = {"n": args.n, "seed": args.seed, "rows": [r.to_dict() for r in rows], "overall_pass": all(r.consistent for r in rows)}
    _emit(json.dumps(report, indent=2, sort_keys=True) + "\n", args.out)
    return EXIT_PASS if report["overall_pass"] else EXIT_FAIL


def cmd_angle(args):
    config = _load(args)
    family = build_family(config.family)
    points, s = sample_plan(config, family)
    trace = angle_constancy(family, points, s, config.tolerances["angle"])
    _emit(json.dumps(trace.to_dict(include_samples=True), indent=2, sort_keys=True) + "\n", args.out)
    return EXIT_PASS if trace.passed else EXIT_FAIL


def cmd_meancurv(args):
    config = _load(args)
    if args.levels:
        config.meancurv["levels"] = args.levels
    if args.connection:
        config.meancurv["connection"] = True
    entry = meancurv_entry(build_family(config.family), config.meancurv)
    _emit(json.dumps(entry, indent=2, sort_keys=True) + "\n", args.out)
    return EXIT_PASS if entry["pass"] else EXIT_FAIL


def cmd_sample(args):
    config = _load(args)
    family = build_family(config.family)
    export_pointcloud(family, sample_plan(config, family), args.csv)
    return EXIT_PASS


def build_parser():
    parser = argparse.ArgumentParser(prog="speclag", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def with_config(p):
        p.add_argument("--config", required=True, help="JSON configuration file")
        p.add_argument("--seed", type=int, help="override samples.seed")
        p.add_argument("--tol", type=_tol_override, action="append", metavar="NAME=VALUE", help="override a tolerance")
        return p

    p = with_config(sub.add_parser("verify", help="run the checks of a configuration"))
    p.add_argument("--out", help="report path (default: stdout)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="Lawlor a-grid dichotomy for the Fubini-Study form")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--grid", type=_grid, required=True, help='a-vectors, e.g. "1,1;1,2;2,2"')
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--sigma-count", type=int, default=200)
    p.add_argument("--tol", type=_tol_override, action="append", metavar="NAME=VALUE")
    p.add_argument("--out")
    p.set_defaults(func=cmd_sweep)

    p = with_config(sub.add_parser("angle", help="dump the Lagrangian angle trace"))
    p.add_argument("--out")
    p.set_defaults(func=cmd_angle)

    p = with_config(sub.add_parser("meancurv", help="Laplace-Beltrami convergence study (n = 2)"))
    p.add_argument("--levels", type=_int_list, help="e.g. 32,64,128")
    p.add_argument("--connection", action="store_true", help="include the ambient Christoffel term")
    p.add_argument("--out")
    p.set_defaults(func=cmd_meancurv)

    p = with_config(sub.add_parser("sample", help="export the embedded point cloud as CSV"))
    p.add_argument("--csv", required=True)
    p.set_defaults(func=cmd_sample)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SpecLagError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
