"""
Fleet-size search and parameter sweeps over one scenario.

Every run re-encodes and re-solves from scratch; runs of a sweep are independent
and may execute concurrently, each with its own solver process.
"""
import csv
import dataclasses
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, TextIO, Tuple

from cli.pipeline import Prepared, Synthesis, synthesize
from criticality.ranking import restrict_to_lines, top_lines
from encoder.model import EncodeOptions
from ingest.scenario import ScenarioSpec
from solver.enumerative import EnumerationLimits
from solver.external import SolverBuilder
from solver.outcome import Status

logger = logging.getLogger(__name__)

SWEEP_VARIABLES = ("cs_pct", "n_uavs", "k", "tc", "tr", "horizon_S", "top_lines")
# other names accepted for a fixed override
FIXED_ALIASES = {"cs": "cs_pct", "rcs": "rcs_pct", "k_resilience": "k", "S": "horizon_S", "horizon": "horizon_S",
                 "uavs": "n_uavs"}
FIXED_FIELDS = SWEEP_VARIABLES + ("rcs_pct",)
SWEEP_FORMAT = "grid-sentinel/1 sweep"
SWEEP_COLUMNS = ["value", "status", "cs_achieved", "rcs_achieved", "wall_time_s", "message"]


class AllUnsat(ValueError):
    pass


@dataclass(frozen=True)
class SweepSpec:
    """
    Attributes:
        variable: the requirement that varies, one of SWEEP_VARIABLES.
        values: sorted, non-empty values to try.
        fixed: overrides applied before every run, keyed by FIXED_FIELDS or FIXED_ALIASES.
        timeout_s: solver wall-clock limit per run.
    """
    variable: str
    values: Tuple[float, ...]
    fixed: Dict[str, float] = field(default_factory=dict)
    timeout_s: float = 600.0

    def __post_init__(self) -> None:
        if self.variable not in SWEEP_VARIABLES:
            raise ValueError(f"cannot sweep '{self.variable}', expected one of {', '.join(SWEEP_VARIABLES)}")
        if not self.values:
            raise ValueError("a sweep needs at least one value")
        if list(self.values) != sorted(self.values):
            raise ValueError("sweep values must be sorted")
        for key in self.fixed:
            fixed_field(key)


@dataclass(frozen=True)
class SweepRow:
    value: float
    status: str
    cs_achieved: Optional[float] = None
    rcs_achieved: Optional[float] = None
    wall_time: float = 0.0
    message: str = ""


class Runner:
    """Solve settings shared by every run of a search or sweep."""

    def __init__(self, backend: str = "smt", options: Optional[EncodeOptions] = None,
                 solver_cmd: Optional[Sequence[str]] = None, timeout_s: float = 600.0,
                 limits: Optional[EnumerationLimits] = None) -> None:
        self.backend = backend
        self.options = options or EncodeOptions()
        self.solver_cmd = solver_cmd
        self.timeout_s = timeout_s
        self.limits = limits

    def run(self, prepared: Prepared, timeout_s: Optional[float] = None, emit_path: Optional[str] = None) -> Synthesis:
        builder = None
        if self.backend == "smt":
            builder = SolverBuilder(self.solver_cmd, self.timeout_s if timeout_s is None else timeout_s)
        return synthesize(prepared, self.backend, self.options, builder, self.limits, emit_path)


def _fit_scores(spec: ScenarioSpec, cs_pct: int) -> ScenarioSpec:
    return spec.replace(cs_pct=cs_pct, rcs_pct=min(spec.rcs_pct, cs_pct))


def apply_value(prepared: Prepared, variable: str, value: float) -> Prepared:
    """The scenario of one sweep row; thresholds are clipped to stay consistent."""
    spec = prepared.spec
    if variable == "top_lines":
        crit = restrict_to_lines(prepared.crit, top_lines(prepared.crit, value))
        return dataclasses.replace(prepared, crit=crit)
    v = int(value)
    if variable == "cs_pct":
        spec = _fit_scores(spec, v)
    elif variable == "n_uavs":
        if not 1 <= v <= len(spec.uavs):
            raise ValueError(f"fleet size {v} outside [1, {len(spec.uavs)}]")
        spec = spec.with_fleet(range(v))
    elif variable == "k":
        spec = spec.replace(k_resilience=v)
    elif variable == "tc":
        spec = spec.replace(tc=v)
    elif variable == "tr":
        spec = spec.replace(tr=v)
    elif variable == "horizon_S":
        spec = spec.replace(horizon_S=v, tc=min(spec.tc, v), tr=min(spec.tr, v))
    return dataclasses.replace(prepared, spec=spec)


def fixed_field(key: str) -> str:
    name = FIXED_ALIASES.get(key, key)
    if name not in FIXED_FIELDS:
        raise ValueError(f"cannot fix '{key}', expected one of {', '.join(FIXED_FIELDS + tuple(FIXED_ALIASES))}")
    return name


def apply_fixed(prepared: Prepared, fixed: Dict[str, float]) -> Prepared:
    """Apply overrides in the order given, with the same clipping as sweep values."""
    for key, value in fixed.items():
        name = fixed_field(key)
        if name == "rcs_pct":
            prepared = dataclasses.replace(prepared, spec=prepared.spec.replace(rcs_pct=int(value)))
        else:
            prepared = apply_value(prepared, name, value)
    return prepared


def run_sweep(prepared: Prepared, sweep: SweepSpec, runner: Runner, jobs: int = 1) -> List[SweepRow]:
    """One row per value, in value order; a failing row records its error and the rest go on."""
    if jobs < 1:
        raise ValueError("jobs must be at least 1")
    prepared = apply_fixed(prepared, sweep.fixed)

    def one(value: float) -> SweepRow:
        try:
            result = runner.run(apply_value(prepared, sweep.variable, value), sweep.timeout_s)
        except (ValueError, OSError) as exc:
            logger.warning(f"sweep {sweep.variable}={value}: {exc}")
            return SweepRow(value, "error", message=str(exc))
        outcome = result.outcome
        if result.report is None:
            return SweepRow(value, outcome.status.value, wall_time=outcome.wall_time, message=outcome.message)
        return SweepRow(value, outcome.status.value, result.report.cs_achieved, result.report.rcs_achieved,
                        outcome.wall_time, outcome.message)

    with ThreadPoolExecutor(max_workers=jobs) as pool:
        rows = list(pool.map(one, sweep.values))
    logger.info(f"sweep over {sweep.variable}: {len(rows)} rows")
    return rows


def write_sweep_csv(rows: Sequence[SweepRow], sweep: SweepSpec, handle: TextIO) -> None:
    handle.write(f"# format: {SWEEP_FORMAT}\n")
    handle.write(f"# variable {sweep.variable}\n")
    writer = csv.writer(handle, lineterminator="\n")
    writer.writerow(SWEEP_COLUMNS)
    for row in rows:
        writer.writerow([f"{row.value:g}", row.status,
                         "" if row.cs_achieved is None else f"{row.cs_achieved:.2f}",
                         "" if row.rcs_achieved is None else f"{row.rcs_achieved:.2f}",
                         f"{row.wall_time:.3f}", row.message])


@dataclass(frozen=True)
class FleetSearch:
    """
    Attributes:
        size: smallest satisfiable prefix of the pool, None when no size was decided sat.
        statuses: fleet size -> solver status, for every size tried.
        synthesis: the run that found `size`.
    """
    size: Optional[int]
    statuses: Dict[int, Status]
    synthesis: Optional[Synthesis] = None

    @property
    def undecided(self) -> Tuple[int, ...]:
        return tuple(n for n, s in self.statuses.items() if s not in (Status.SAT, Status.UNSAT))


def min_uavs(prepared: Prepared, pool: Sequence[int], runner: Runner, cs_pct: Optional[int] = None) -> FleetSearch:
    """
    Linear search for the smallest prefix of `pool` (0-based UAV indices) with a plan.

    Raises:
        AllUnsat: every prefix is unsatisfiable.
    """
    if not pool:
        raise ValueError("the UAV pool is empty")
    spec = prepared.spec if cs_pct is None else _fit_scores(prepared.spec, cs_pct)
    statuses: Dict[int, Status] = {}
    for n in range(1, len(pool) + 1):
        trial = dataclasses.replace(prepared, spec=spec.with_fleet(pool[:n]))
        result = runner.run(trial)
        statuses[n] = result.outcome.status
        logger.info(f"fleet of {n}: {result.outcome.status.value}")
        if result.outcome.status == Status.SAT:
            return FleetSearch(n, statuses, result)
    search = FleetSearch(None, statuses)
    if not search.undecided:
        raise AllUnsat(f"no prefix of the {len(pool)}-UAV pool can meet the requirements")
    return search
