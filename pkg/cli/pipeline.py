"""
Scenario -> criticality -> network -> solve -> plan, shared by every subcommand.

Usage:
    prepared = prepare(load_scenario("data/ieee14.txt"))
    result = synthesize(prepared, backend="enumerative")
"""
import logging
from dataclasses import dataclass
from typing import Optional

from criticality.ranking import CriticalityMap, point_weights, rank_criticality, restrict_to_lines, top_lines
from encoder.encode import encode
from encoder.model import EncodeOptions
from ingest.scenario import ScenarioSpec
from plan.coverage import CoverageReport, coverage_scores
from plan.plan import Plan
from powergrid.contingency import LodfMatrix, PiScores, analyze_grid
from powergrid.dcflow import FlowState
from powergrid.grid import Grid, GridOptions, grid_from_scenario
from solver.decode import decode
from solver.enumerative import EnumerationLimits, solve_enumerative
from solver.external import SolverBuilder, solve_external
from solver.outcome import SolveOutcome, Status
from solver.smtlib import to_smtlib
from survnet.network import SurvNet, build_net

logger = logging.getLogger(__name__)

BACKENDS = ("smt", "enumerative")


@dataclass(frozen=True)
class Prepared:
    spec: ScenarioSpec
    grid: Grid
    base: FlowState
    factors: LodfMatrix
    scores: PiScores
    crit: CriticalityMap
    net: SurvNet


def prepare(spec: ScenarioSpec, grid_options: Optional[GridOptions] = None,
            top_fraction: Optional[float] = None) -> Prepared:
    """Run the grid analysis and build the surveillance network of `spec`."""
    grid = grid_from_scenario(spec, grid_options)
    base, factors, scores = analyze_grid(grid, grid_options, spec.capacities)
    crit = rank_criticality(scores, spec.pi_distance_D)
    crit = point_weights(crit, {lid: pts for lid, pts in enumerate(spec.line_points, start=1)}, spec.points)
    if top_fraction is not None:
        crit = restrict_to_lines(crit, top_lines(crit, top_fraction))
    return Prepared(spec, grid, base, factors, scores, crit, build_net(spec))


@dataclass(frozen=True)
class Synthesis:
    outcome: SolveOutcome
    plan: Optional[Plan] = None
    report: Optional[CoverageReport] = None


def synthesize(prepared: Prepared, backend: str = "smt", options: Optional[EncodeOptions] = None,
               builder: Optional[SolverBuilder] = None, limits: Optional[EnumerationLimits] = None,
               emit_path: Optional[str] = None) -> Synthesis:
    """
    Solve the planning problem and decode the plan when one exists.

    Raises:
        SolverError: the solver cannot be started, or the oracle outgrows its limits.
        EncodingError: the scenario fails the encoder's preconditions.
    """
    if backend not in BACKENDS:
        raise ValueError(f"unknown backend '{backend}', expected one of {', '.join(BACKENDS)}")
    options = options or EncodeOptions()
    spec, net = prepared.spec, prepared.net

    if backend == "enumerative":
        outcome = solve_enumerative(spec, net, prepared.crit, options, limits)
    else:
        model = encode(spec, net, prepared.crit, options)
        script = to_smtlib(model)
        if emit_path:
            with open(emit_path, "w") as handle:
                handle.write(script)
            logger.info(f"wrote SMT-LIB2 script to {emit_path}")
        outcome = solve_external(script, builder, len(model.declarations), len(model.assertions))

    if outcome.status != Status.SAT:
        logger.info(f"{backend} backend: {outcome.status.value} {outcome.message}".rstrip())
        return Synthesis(outcome)
    plan = decode(outcome.assignment, spec, net, options)
    report = coverage_scores(plan, spec, prepared.crit, options.weight_resolution)
    return Synthesis(outcome, plan, report)
