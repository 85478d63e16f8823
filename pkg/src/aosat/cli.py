"""Command-line front end.

Subcommands: solve one instance, batch a grid of experiments, stats to
compare two batch reports, figdata to extract plot columns from a trace.
Exit codes: 0 when `solve` finds a satisfying assignment (and for any other
successful subcommand), 10 when the iteration budget runs out first, 2 for
usage or input errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .cnf import CnfParseError, parse_dimacs_file
from .engine import config_from_dict, load_config_file, run_ea
from .harness import (
    FIGURE_KINDS,
    BatchReport,
    BatchSpec,
    emit_figure_data,
    run_batch,
    wilcoxon_ranksum,
)

EXIT_SOLVED = 0
EXIT_EXHAUSTED = 10
EXIT_USAGE = 2

# `solve` without a config file uses the full operator portfolio; its size
# makes the textbook floor p_min = 0.05 degenerate (20 * 0.05 = 1 pins every
# operator to the floor), so the default profile lowers the floor.
_DEFAULT_SOLVE_OPTIONS = {"p_min": 0.01}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="aosat",
        description="Adaptive-operator-selection evolutionary SAT solver",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="run the solver on one DIMACS instance")
    p_solve.add_argument("instance", help="path to a DIMACS CNF file")
    p_solve.add_argument("--config", help="flat key=value configuration file")
    p_solve.add_argument("--seed", type=int, help="random seed override")
    p_solve.add_argument("--max-iterations", type=int, help="iteration budget override")
    p_solve.add_argument("--trace", help="write the run trace CSV here")
    p_solve.add_argument("--quiet", action="store_true", help="suppress the assignment line")

    p_batch = sub.add_parser("batch", help="run a batch described by a JSON spec file")
    p_batch.add_argument("spec", help="path to the batch spec (JSON)")

    p_stats = sub.add_parser("stats", help="rank-sum comparison of two batch reports")
    p_stats.add_argument("report_a", help="first report.json")
    p_stats.add_argument("report_b", help="second report.json")
    p_stats.add_argument("--instance", help="instance label to compare")
    p_stats.add_argument("--config-a", help="configuration name inside report A")
    p_stats.add_argument("--config-b", help="configuration name inside report B")

    p_fig = sub.add_parser("figdata", help="extract figure columns from a trace CSV")
    p_fig.add_argument("trace", help="trace CSV produced by solve/batch")
    p_fig.add_argument("--kind", required=True, choices=FIGURE_KINDS)
    p_fig.add_argument("--out", help="output path (default: stdout)")

    return parser


def _cmd_solve(args) -> int:
    try:
        formula = parse_dimacs_file(args.instance)
    except (OSError, CnfParseError) as exc:
        print(f"error: {args.instance}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    options = dict(_DEFAULT_SOLVE_OPTIONS)
    if args.config:
        try:
            options = load_config_file(args.config)
        except (OSError, ValueError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_USAGE
    try:
        config = config_from_dict(options, formula=formula)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.seed is not None:
        config.seed = args.seed
    if args.max_iterations is not None:
        config.max_iterations = args.max_iterations

    result = run_ea(config)
    print(f"instance={args.instance} variables={formula.num_variables} "
          f"clauses={formula.num_clauses}")
    print(f"seed={result.seed} iterations={result.iterations_executed} "
          f"best={result.best_false_count} best_iteration={result.best_iteration}")
    if args.trace:
        result.trace.to_csv(args.trace)
        print(f"trace={args.trace}")
    if result.solved:
        print("satisfying assignment found")
        if not args.quiet:
            print("v " + "".join("1" if b else "0" for b in result.best_assignment))
        return EXIT_SOLVED
    print("budget exhausted without a satisfying assignment")
    return EXIT_EXHAUSTED


def _cmd_batch(args) -> int:
    try:
        spec = BatchSpec.from_json(args.spec)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    report = run_batch(spec)
    out = Path(spec.output_dir)
    for row in report.summary_rows():
        print(f"{row['instance']:>24} {row['config']:>16} runs={row['runs']} "
              f"min={row['min']} median={row['median']} std={row['std']}")
    for (instance, a, b), p in sorted(report.pvalues.items()):
        print(f"{instance:>24} {a} vs {b}: p={p:.6g}")
    print(f"outputs in {out}")
    return 0


def _pick_cell(report: BatchReport, which: str, instance, config) -> tuple:
    cells = [
        cell for cell in report.cells.values()
        if (instance is None or cell.instance == instance)
        and (config is None or cell.config == config)
    ]
    if len(cells) != 1:
        available = ", ".join(f"{c.instance}/{c.config}" for c in report.cells.values())
        raise ValueError(
            f"report {which} needs exactly one matching cell (found {len(cells)}); "
            f"available: {available}"
        )
    return cells[0]


def _cmd_stats(args) -> int:
    try:
        report_a = BatchReport.from_json(args.report_a)
        report_b = BatchReport.from_json(args.report_b)
        cell_a = _pick_cell(report_a, "A", args.instance, args.config_a)
        cell_b = _pick_cell(report_b, "B", args.instance, args.config_b)
        p = wilcoxon_ranksum(cell_a.bests, cell_b.bests)
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(f"A: {cell_a.instance}/{cell_a.config} runs={len(cell_a.bests)} "
          f"median={cell_a.median} min={cell_a.min}")
    print(f"B: {cell_b.instance}/{cell_b.config} runs={len(cell_b.bests)} "
          f"median={cell_b.median} min={cell_b.min}")
    print(f"rank-sum p={p:.6g}")
    return 0


def _cmd_figdata(args) -> int:
    try:
        text = emit_figure_data(args.trace, args.kind, args.out)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.out is None:
        sys.stdout.write(text)
    else:
        print(f"wrote {args.out}")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command == "solve":
        return _cmd_solve(args)
    if args.command == "batch":
        return _cmd_batch(args)
    if args.command == "stats":
        return _cmd_stats(args)
    return _cmd_figdata(args)


if __name__ == "__main__":
    sys.exit(main())
