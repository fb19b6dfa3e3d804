"""
grid-sentinel: surveillance trajectories for UAV fleets guarding power lines.

Usage:
    python -m cli analyze data/ieee14.txt --out-dir out/
    python -m cli plan data/ieee14.txt --out plan.txt --timeout-s 3600
    python -m cli validate data/ieee14.txt plan.txt --json
    python -m cli min-uavs data/ieee14.txt --cs 80
    python -m cli sweep data/ieee14.txt --variable tc --values 25,30,35 --jobs 3 --out-dir out/

Exit codes: 0 sat / clean, 1 unsat / violations, 2 unknown or timeout, 3 tool error.
"""
import argparse
import json
import logging
import os
import sys
from typing import List, Optional

from cli.analysis import write_analysis
from cli.pipeline import BACKENDS, Prepared, prepare
from cli.svg import polyline_chart
from cli.sweep import SWEEP_VARIABLES, AllUnsat, Runner, SweepSpec, min_uavs, run_sweep, write_sweep_csv
from encoder.model import EncodeOptions
from ingest.parser import load_scenario
from plan.coverage import coverage_scores
from plan.failures import inject_failures
from plan.planio import read_plan, write_plan
from plan.validate import display_violations, required_mode, validate
from powergrid.grid import GridOptions
from solver.enumerative import EnumerationLimits
from solver.outcome import Status

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_NO, EXIT_UNDECIDED, EXIT_TOOL = 0, 1, 2, 3

STATUS_EXIT = {
    Status.SAT: EXIT_OK,
    Status.UNSAT: EXIT_NO,
    Status.UNKNOWN: EXIT_UNDECIDED,
    Status.TIMEOUT: EXIT_UNDECIDED,
    Status.SOLVER_ERROR: EXIT_TOOL,
}


def _ids(text: str) -> List[int]:
    return [int(t) for t in text.split(",") if t.strip()]


def _numbers(text: str) -> List[float]:
    return [float(t) for t in text.split(",") if t.strip()]


def _prepare(args: argparse.Namespace) -> Prepared:
    options = GridOptions(capacity_alpha=args.capacity_alpha, pi_exponent=args.pi_exponent)
    return prepare(load_scenario(args.scenario), options, args.top_lines)


def _runner(args: argparse.Namespace) -> Runner:
    return Runner(args.backend, EncodeOptions(cyclic=args.cyclic), args.solver_cmd, args.timeout_s,
                  EnumerationLimits(max_trajectories=args.max_trajectories))


def cmd_analyze(args: argparse.Namespace) -> int:
    prepared = _prepare(args)
    for path in write_analysis(prepared, args.out_dir):
        print(path)
    if not args.quiet:
        prepared.scores.display()
        prepared.crit.display()
    return EXIT_OK


def cmd_plan(args: argparse.Namespace) -> int:
    prepared = _prepare(args)
    result = _runner(args).run(prepared, emit_path=args.emit_smt2)
    outcome = result.outcome
    print(f"status: {outcome.status.value} ({outcome.backend}, {outcome.wall_time:.2f}s)")
    if outcome.message:
        print(f"message: {outcome.message}")
    if result.plan is None:
        return STATUS_EXIT[outcome.status]

    if args.out:
        with open(args.out, "w") as handle:
            write_plan(result.plan, handle, result.report)
        print(f"plan written to {args.out}")
    else:
        write_plan(result.plan, sys.stdout, result.report)
    if not args.quiet:
        result.report.display()
    return EXIT_OK


def cmd_validate(args: argparse.Namespace) -> int:
    prepared = _prepare(args)
    spec = prepared.spec
    with open(args.plan) as handle:
        plan = read_plan(handle)
    violations = validate(plan, spec, prepared.net, prepared.crit, cyclic=args.cyclic)
    plan, _ = required_mode(plan, spec, args.cyclic)
    report = coverage_scores(plan, spec, prepared.crit)
    audit = inject_failures(plan, spec) if spec.k_resilience < len(plan.uavs) else None
    audit_ok = audit is None or audit.passed_points == report.resilient_points

    if args.json:
        json.dump({
            "valid": not violations,
            "violations": [{"rule": v.rule, "uav": v.uav, "point": v.point, "step": v.step,
                            "message": v.message} for v in violations],
            "cs_achieved": round(report.cs_achieved, 4),
            "rcs_achieved": round(report.rcs_achieved, 4),
            "surveilled_points": sorted(report.surveilled_points),
            "resilient_points": sorted(report.resilient_points),
            "failure_audit": None if audit is None else {
                "k": audit.k, "passed_points": sorted(audit.passed_points), "consistent": audit_ok},
        }, sys.stdout, indent=2, sort_keys=True)
        sys.stdout.write("\n")
    else:
        if violations:
            display_violations(violations)
        else:
            print("plan is valid")
        report.display()
        if audit is not None:
            audit.display()
    return EXIT_OK if not violations else EXIT_NO


def cmd_min_uavs(args: argparse.Namespace) -> int:
    prepared = _prepare(args)
    pool = [i - 1 for i in _ids(args.pool)] if args.pool else list(range(prepared.spec.n_uavs))
    if any(not 0 <= i < prepared.spec.n_uavs for i in pool):
        raise ValueError(f"UAV pool {args.pool} names UAVs outside 1..{prepared.spec.n_uavs}")
    try:
        search = min_uavs(prepared, pool, _runner(args), args.cs)
    except AllUnsat as exc:
        print(f"unsat: {exc}")
        return EXIT_NO
    for n, status in search.statuses.items():
        print(f"{n} UAVs: {status.value}")
    if search.size is None:
        print(f"undecided sizes: {', '.join(map(str, search.undecided))}")
        return EXIT_UNDECIDED
    print(f"minimum fleet: {search.size}")
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace) -> int:
    prepared = _prepare(args)
    fixed = {}
    for item in args.fixed or []:
        key, _, value = item.partition("=")
        fixed[key.strip()] = float(value)
    sweep = SweepSpec(args.variable, tuple(_numbers(args.values)), fixed, args.timeout_s)
    rows = run_sweep(prepared, sweep, _runner(args), args.jobs)

    os.makedirs(args.out_dir, exist_ok=True)
    csv_path = os.path.join(args.out_dir, f"sweep_{sweep.variable}.csv")
    with open(csv_path, "w", newline="") as handle:
        write_sweep_csv(rows, sweep, handle)
    print(csv_path)
    if args.svg:
        timed = [(row.value, row.wall_time) for row in rows if row.status in ("sat", "unsat")]
        svg_path = os.path.join(args.out_dir, f"sweep_{sweep.variable}.svg")
        with open(svg_path, "w") as handle:
            handle.write(polyline_chart(timed, f"solve time vs {sweep.variable}", sweep.variable, "seconds"))
        print(svg_path)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("scenario", help="scenario file in the sectioned text format")
    common.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG")
    common.add_argument("-q", "--quiet", action="store_true", help="skip the summary tables")
    common.add_argument("--capacity-alpha", type=float, default=1.5,
                        help="default line capacity as a multiple of base flow (default: 1.5)")
    common.add_argument("--pi-exponent", type=int, default=1, help="PI exponent n (default: 1)")
    common.add_argument("--top-lines", type=float, default=None,
                        help="only guard the most critical fraction of lines, e.g. 0.3")

    solving = argparse.ArgumentParser(add_help=False)
    solving.add_argument("--backend", choices=BACKENDS, default="smt",
                         help="external SMT solver or the built-in search for tiny scenarios (default: smt)")
    solving.add_argument("--solver-cmd", default=None,
                         help="solver command reading SMT-LIB2 on stdin (default: $GRID_SENTINEL_SOLVER or 'z3 -in')")
    solving.add_argument("--timeout-s", type=float, default=600.0, help="solver time limit per run (default: 600)")
    solving.add_argument("--cyclic", action="store_true", help="require a repeatable plan")
    solving.add_argument("--max-trajectories", type=int, default=EnumerationLimits.max_trajectories,
                         help="search budget of the enumerative backend")

    parser = argparse.ArgumentParser(prog="grid-sentinel", description=__doc__.split("\n\n")[0].strip())
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common], help="DC flows, LODF, PI and criticality CSVs")
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("plan", parents=[common, solving], help="synthesize a surveillance plan")
    p.add_argument("--out", help="plan file (default: stdout)")
    p.add_argument("--emit-smt2", metavar="PATH", help="also write the SMT-LIB2 script here")
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("validate", parents=[common], help="re-check a saved plan")
    p.add_argument("plan", help="plan file written by 'plan'")
    p.add_argument("--json", action="store_true", help="machine-readable result on stdout")
    p.add_argument("--cyclic", action="store_true", help="check the plan as a repeatable one")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("min-uavs", parents=[common, solving], help="smallest fleet that meets the targets")
    p.add_argument("--pool", help="comma-separated 1-based UAV ids in the order to add them (default: all)")
    p.add_argument("--cs", type=int, default=None, help="continuous coverage target overriding the scenario's")
    p.set_defaults(func=cmd_min_uavs)

    p = sub.add_parser("sweep", parents=[common, solving], help="solve once per value of one requirement")
    p.add_argument("--variable", choices=SWEEP_VARIABLES, required=True)
    p.add_argument("--values", required=True, help="comma-separated, ascending")
    p.add_argument("--fixed", action="append", metavar="NAME=VALUE",
                   help="override applied to every run, e.g. cs=60 or horizon_S=40; repeatable")
    p.add_argument("--jobs", type=int, default=1, help="runs solved concurrently (default: 1)")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--svg", action="store_true", help="also draw solve time against the swept value")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    level = logging.WARNING if args.verbose == 0 else logging.INFO if args.verbose == 1 else logging.DEBUG
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        logger.debug("tool error", exc_info=True)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_TOOL
