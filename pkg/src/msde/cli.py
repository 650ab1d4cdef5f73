"""Command-line entry point: ``msde run``, ``msde sweep-cr``, ``msde compare``."""
import argparse
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path

import yaml

from . import problems
from .core import ConfigurationError, Strategy
from .harness import (
    ExperimentSpec,
    ExperimentTable,
    compare_sign,
    cr_sweep,
    emit_csv,
    run_experiment,
    spec_metadata,
)
from .memetic import SEARCH_LINES

log = logging.getLogger("msde")

ALGOS = {"de": (Strategy.DE,), "msde": (Strategy.MSDE,), "both": (Strategy.DE, Strategy.MSDE)}


def _float_list(text):
    return [float(t) for t in text.split(",") if t.strip()]


def _problem_list(text):
    if text.strip().lower() == "all":
        return problems.names()
    return [t.strip() for t in text.split(",") if t.strip()]


def _add_experiment_args(p):
    p.add_argument("--config", type=Path, help="YAML or JSON file with ExperimentSpec fields")
    p.add_argument("--problems", type=_problem_list, help="comma-separated names or 'all'")
    p.add_argument("--algo", choices=sorted(ALGOS))
    p.add_argument("--runs", type=int)
    p.add_argument("--np", type=int, dest="np_")
    p.add_argument("--f", type=float, dest="scale_factor")
    p.add_argument("--cr", type=float, dest="crossover_rate")
    p.add_argument("--max-evals", type=int)
    p.add_argument("--seed", type=int, help="master seed")
    p.add_argument("--gss-tol", type=float, help="GSS width tolerance")
    p.add_argument("--gss-iters", type=int, help="maximum GSS iterations")
    p.add_argument("--search-line", choices=SEARCH_LINES,
                   help="line searched by GSS each generation (default: best)")
    p.add_argument("--table-optima", action="store_true",
                   help="measure errors against the rounded tabulated optima")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.add_argument("--out", type=Path, help="CSV destination (default: stdout)")
    p.add_argument("--plot", action="store_true", help="write a PNG figure next to --out")


def build_spec(args, default_algo="both") -> ExperimentSpec:
    data = {}
    if args.config is not None:
        text = args.config.read_text()
        data = (json.loads(text) if args.config.suffix == ".json" else yaml.safe_load(text)) or {}
    spec = ExperimentSpec.from_mapping(data)
    base = spec.base_config
    for attr, value in (("np", args.np_), ("scale_factor", args.scale_factor),
                        ("crossover_rate", args.crossover_rate), ("max_evals", args.max_evals)):
        if value is not None:
            base = replace(base, **{attr: value})
    mem = spec.memetic
    for attr, value in (("width_tolerance", args.gss_tol), ("max_gss_iterations", args.gss_iters),
                        ("search_line", args.search_line)):
        if value is not None:
            mem = replace(mem, **{attr: value})
    changes = {"base_config": base, "memetic": mem}
    if args.problems is not None:
        changes["problems"] = args.problems
    if args.algo is not None:
        changes["algorithms"] = ALGOS[args.algo]
    elif "algorithms" not in data:
        changes["algorithms"] = ALGOS[default_algo]
    if args.runs is not None:
        changes["runs"] = args.runs
    if args.seed is not None:
        changes["master_seed"] = args.seed
    if args.table_optima:
        changes["table_optima"] = True
    return replace(spec, **changes)


def _write(table, args, metadata=None):
    if args.out is None:
        emit_csv(table, sys.stdout)
        return
    emit_csv(table, args.out)
    if metadata is not None:
        args.out.with_suffix(".json").write_text(json.dumps(metadata, indent=2) + "\n")
    log.info("wrote %s", args.out)


def _plot_path(args, what):
    if not args.plot:
        return None
    if args.out is None:
        raise ValueError("--plot needs --out")
    return args.out.with_suffix(".png")


def cmd_run(args):
    spec = build_spec(args)
    png = _plot_path(args, "run")
    table = run_experiment(
        spec, workers=args.jobs,
        progress=lambda c: log.info("%s %s SR=%d AFE=%.1f", c.problem, c.algorithm.value,
                                    c.stats.sr, c.stats.afe))
    _write(table, args, spec_metadata(spec))
    if png:
        from .plotting import plot_experiment
        plot_experiment(table, png)


def cmd_sweep(args):
    spec = build_spec(args, default_algo="msde")
    cr_values = args.cr_list or [round(0.1 * k, 1) for k in range(1, 11)]
    png = _plot_path(args, "sweep")
    table = cr_sweep(spec, cr_values, workers=args.jobs,
                     progress=lambda cr: log.info("CR=%g done", cr))
    meta = spec_metadata(spec)
    meta["cr_values"] = cr_values
    meta["aggregation"] = "AFE averaged over the listed problems"
    _write(table, args, meta)
    if png:
        from .plotting import plot_cr_sweep
        plot_cr_sweep(table, png)


def cmd_compare(args):
    table = ExperimentTable()
    for path in args.inputs:
        table = table.merge(ExperimentTable.from_csv(path))
    _write(compare_sign(table), args)


def make_parser():
    parser = argparse.ArgumentParser(prog="msde", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="repeated runs, one CSV row per (problem, algorithm)")
    _add_experiment_args(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep-cr", help="mean AFE for a list of crossover rates")
    _add_experiment_args(p)
    p.add_argument("--cr-list", type=_float_list, help="comma-separated CR values (default 0.1..1.0)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("compare", help="MSDE vs DE sign table from run outputs")
    p.add_argument("inputs", nargs="+", type=Path, help="CSV files written by 'msde run'")
    p.add_argument("--out", type=Path)
    p.add_argument("--plot", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(message)s")
    try:
        args.func(args)
    except (ValueError, KeyError, ConfigurationError, OSError) as exc:
        print(f"msde: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
