"""Command line entry point.

Subcommands:

    run            execute a plan file (exit 0 ok, 1 plan error, 2 when
                   some cells failed)
    summarize      aggregate a results directory into tables
    list-problems  registered benchmark names with dimensions
    list-configs   built-in change schedules
"""

from __future__ import annotations

import argparse
import sys

from .harness import (BUILTIN_CONFIGS, PlanError, execute, load_records,
                      parse_plan, summarize)
from .problems import PROBLEM_NAMES, make_problem


def _cmd_run(args) -> int:
    try:
        with open(args.plan, encoding="utf-8") as fh:
            plan = parse_plan(fh.read())
    except OSError as exc:
        print(f"error: cannot read plan: {exc}", file=sys.stderr)
        return 1
    except PlanError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    records, failures = execute(plan, jobs=args.jobs, out_dir=args.out)
    out = args.out if args.out is not None else plan.output_dir
    print(f"{len(records)} record(s) in {out}; {failures} failure(s)")
    return 2 if failures else 0


def _cmd_summarize(args) -> int:
    try:
        records = load_records(args.results)
    except OSError as exc:
        print(f"error: cannot read records: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    sys.stdout.write(summarize(records, fmt=args.format))
    return 0


def _cmd_list_problems(_args) -> int:
    for name in PROBLEM_NAMES:
        p = make_problem(name)
        print(f"{name}: {p.decision_dim} variables, "
              f"{p.objective_count} objectives, type {p.dmop_type}")
    return 0


def _cmd_list_configs(_args) -> int:
    for config in BUILTIN_CONFIGS.values():
        print(f"{config.id}: n_t={config.n_t} tau_t={config.tau_t} "
              f"tau_T={config.tau_T} ({config.num_environments} "
              "environments)")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="svmdmoea",
        description="Dynamic multi-objective experiments with "
                    "classifier-seeded restarts.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute a plan file")
    p_run.add_argument("--plan", required=True, help="path to a plan file")
    p_run.add_argument("--jobs", type=int, default=1,
                       help="parallel worker processes (default 1)")
    p_run.add_argument("--out", default=None,
                       help="override the plan's output directory")
    p_run.set_defaults(func=_cmd_run)

    p_sum = sub.add_parser("summarize", help="aggregate result records")
    p_sum.add_argument("--in", dest="results", required=True,
                       help="directory containing record files")
    p_sum.add_argument("--format", choices=("md", "csv"), default="md")
    p_sum.set_defaults(func=_cmd_summarize)

    p_lp = sub.add_parser("list-problems", help="show benchmark problems")
    p_lp.set_defaults(func=_cmd_list_problems)

    p_lc = sub.add_parser("list-configs", help="show built-in schedules")
    p_lc.set_defaults(func=_cmd_list_configs)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
