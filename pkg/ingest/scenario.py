"""
Scenario data model for grid surveillance planning.

Classes:
- UavSpec: one UAV of the fleet (start point, fuel figures).
- Line: a transmission line between two buses.
- Segment: a unit-time link between two surveillance points.
- ScenarioSpec: the complete parsed input (grid, surveillance network, fleet, requirements).

Functions:
- validate_scenario(spec, where=None): checks every cross-field invariant and raises
  a ScenarioError subclass naming the offending section line.
"""
import dataclasses
import logging
import math
from dataclasses import dataclass
from typing import Dict, Iterable, NamedTuple, Optional, Tuple

logger = logging.getLogger(__name__)


class ScenarioError(ValueError):
    """Base class of every scenario diagnostic; carries the 1-based source line when known."""

    def __init__(self, message: str, line: Optional[int] = None) -> None:
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)


class MalformedSection(ScenarioError):
    pass


class DanglingReference(ScenarioError):
    pass


class InvariantViolation(ScenarioError):
    pass


class Line(NamedTuple):
    from_bus: int
    to_bus: int
    reactance: float


class Segment(NamedTuple):
    point_a: int
    point_b: int
    # None when the file gives no ratio (level segment)
    cost_ratio: Optional[float] = None


@dataclass(frozen=True)
class UavSpec:
    init_point: int
    init_fuel: int
    fuel_cap: int
    ffuel: int
    hfuel: int


@dataclass(frozen=True)
class ScenarioSpec:
    """
    A parsed scenario. Collections are tuples so a spec can be shared read-only.

    Attributes:
        loads, gens: (bus, MW) pairs in file order.
        lines: transmission lines in file order; a line is addressed by its index.
        line_points: ordered point list of each line, aligned with `lines`.
        capacities: optional per-line capacity (MW); None means the alpha default applies.
    """
    n_buses: int
    n_lines: int
    n_points: int
    n_segments: int
    segment_len: int
    n_uavs: int
    horizon_S: int
    loads: Tuple[Tuple[int, float], ...]
    gens: Tuple[Tuple[int, float], ...]
    lines: Tuple[Line, ...]
    pi_distance_D: float
    line_points: Tuple[Tuple[int, ...], ...]
    segments: Tuple[Segment, ...]
    uavs: Tuple[UavSpec, ...]
    tc: int
    k_resilience: int
    tr: int
    cs_pct: int
    rcs_pct: int
    base_point: int
    cyclic: bool = False
    capacities: Optional[Tuple[float, ...]] = None

    @property
    def points(self) -> range:
        return range(1, self.n_points + 1)

    @property
    def buses(self) -> range:
        return range(1, self.n_buses + 1)

    def with_fleet(self, uav_indices: Iterable[int]) -> "ScenarioSpec":
        """Return a copy flying only the given UAVs (0-based indices into `uavs`, order kept)."""
        fleet = tuple(self.uavs[i] for i in uav_indices)
        return self.replace(uavs=fleet, n_uavs=len(fleet))

    def replace(self, **changes) -> "ScenarioSpec":
        """dataclasses.replace followed by full validation."""
        spec = dataclasses.replace(self, **changes)
        validate_scenario(spec)
        return spec


def _check_point(spec: ScenarioSpec, point: int, what: str, line: Optional[int]) -> None:
    if not 1 <= point <= spec.n_points:
        raise DanglingReference(f"{what} refers to point {point}, outside [1, {spec.n_points}]", line)


def _check_bus(spec: ScenarioSpec, bus: int, what: str, line: Optional[int]) -> None:
    if not 1 <= bus <= spec.n_buses:
        raise DanglingReference(f"{what} refers to bus {bus}, outside [1, {spec.n_buses}]", line)


def _positive(value: float) -> bool:
    return math.isfinite(value) and value > 0


def validate_scenario(spec: ScenarioSpec, where: Optional[Dict[str, int]] = None) -> None:
    """
    Check every invariant of a ScenarioSpec.

    Args:
        spec: the scenario to check.
        where: optional map section-key -> source line of its header, used in diagnostics.

    Raises:
        DanglingReference, InvariantViolation
    """
    where = where or {}
    at = where.get

    for name in ("n_buses", "n_points", "horizon_S", "segment_len"):
        if getattr(spec, name) < 1:
            raise InvariantViolation(f"{name} must be positive, got {getattr(spec, name)}", at("header"))
    if spec.segment_len != 1:
        logger.warning(f"segment length {spec.segment_len} ignored: one segment is flown per step")

    for bus, mw in spec.loads:
        _check_bus(spec, bus, "load", at("loads"))
        if not math.isfinite(mw):
            raise InvariantViolation(f"load at bus {bus} must be finite, got {mw}", at("loads"))
    for bus, mw in spec.gens:
        _check_bus(spec, bus, "generation", at("gens"))
        if not math.isfinite(mw):
            raise InvariantViolation(f"generation at bus {bus} must be finite, got {mw}", at("gens"))

    if len(spec.lines) != spec.n_lines:
        raise InvariantViolation(f"expected {spec.n_lines} lines, got {len(spec.lines)}", at("lines"))
    for idx, line in enumerate(spec.lines, start=1):
        _check_bus(spec, line.from_bus, f"line {idx}", at("lines"))
        _check_bus(spec, line.to_bus, f"line {idx}", at("lines"))
        if line.from_bus == line.to_bus:
            raise InvariantViolation(f"line {idx} connects bus {line.from_bus} to itself", at("lines"))
        if not _positive(line.reactance):
            raise InvariantViolation(f"line {idx} reactance must be positive", at("lines"))

    if spec.capacities is not None:
        if len(spec.capacities) != spec.n_lines:
            raise InvariantViolation(
                f"expected {spec.n_lines} capacities, got {len(spec.capacities)}", at("capacities"))
        if not all(_positive(c) for c in spec.capacities):
            raise InvariantViolation("line capacities must be positive", at("capacities"))

    if not (math.isfinite(spec.pi_distance_D) and spec.pi_distance_D >= 0):
        raise InvariantViolation("criticality distance must be finite and non-negative", at("pi_distance"))

    if len(spec.line_points) != spec.n_lines:
        raise InvariantViolation(
            f"expected {spec.n_lines} line point sets, got {len(spec.line_points)}", at("line_points"))
    for idx, (line, pts) in enumerate(zip(spec.lines, spec.line_points), start=1):
        if len(pts) < 2:
            raise InvariantViolation(f"line {idx} point list needs both end points", at("line_points"))
        for p in pts:
            _check_point(spec, p, f"line {idx} point list", at("line_points"))
        if {pts[0], pts[-1]} != {line.from_bus, line.to_bus}:
            raise InvariantViolation(
                f"line {idx} point list must start and end at buses {line.from_bus} and {line.to_bus}",
                at("line_points"))

    if len(spec.segments) != spec.n_segments:
        raise InvariantViolation(
            f"expected {spec.n_segments} segments, got {len(spec.segments)}", at("segments"))
    for seg in spec.segments:
        _check_point(spec, seg.point_a, "segment", at("segments"))
        _check_point(spec, seg.point_b, "segment", at("segments"))
        if seg.cost_ratio is not None and not _positive(seg.cost_ratio):
            raise InvariantViolation(
                f"segment {seg.point_a}-{seg.point_b} cost ratio must be positive", at("segments"))

    if len(spec.uavs) != spec.n_uavs:
        raise InvariantViolation(f"expected {spec.n_uavs} UAVs, got {len(spec.uavs)}", at("uavs"))
    for idx, uav in enumerate(spec.uavs, start=1):
        _check_point(spec, uav.init_point, f"UAV {idx}", at("uavs"))
        if not 0 < uav.init_fuel <= uav.fuel_cap:
            raise InvariantViolation(
                f"UAV {idx} needs 0 < init_fuel <= fuel_cap, got {uav.init_fuel} / {uav.fuel_cap}", at("uavs"))
        if uav.ffuel <= 0 or uav.hfuel <= 0:
            raise InvariantViolation(f"UAV {idx} fuel rates must be positive", at("uavs"))

    if not 1 <= spec.tc <= spec.horizon_S:
        raise InvariantViolation(f"tc must lie in [1, {spec.horizon_S}], got {spec.tc}", at("tc"))
    if not 1 <= spec.tr <= spec.horizon_S:
        raise InvariantViolation(f"tr must lie in [1, {spec.horizon_S}], got {spec.tr}", at("resilience"))
    if spec.k_resilience < 0:
        raise InvariantViolation("k must be non-negative", at("resilience"))
    if not 0 <= spec.rcs_pct <= spec.cs_pct <= 100:
        raise InvariantViolation(
            f"scores need 0 <= rcs <= cs <= 100, got cs={spec.cs_pct} rcs={spec.rcs_pct}", at("scores"))

    _check_point(spec, spec.base_point, "base point", at("base"))
