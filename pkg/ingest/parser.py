"""
Reader and writer for the sectioned scenario text format.

A file is a sequence of sections, each opened by a '#' comment line naming it and
followed by whitespace-separated numbers. '%' starts a comment that runs to the end
of the line. Sections must appear in the canonical order below; optional ones may be
left out.

Usage:
    spec = parse_scenario(open("data/ieee14.txt").read())
    text = serialize_scenario(spec)
    assert parse_scenario(text) == spec
"""
import logging
import math
import sys
from typing import Dict, List, NamedTuple, Optional, Tuple

from ingest.scenario import (
    DanglingReference,
    Line,
    MalformedSection,
    ScenarioSpec,
    Segment,
    UavSpec,
    InvariantViolation,
    validate_scenario,
)

logger = logging.getLogger(__name__)


class SectionDef(NamedTuple):
    key: str
    phrase: str  # lower-case text identifying the header
    title: str  # header emitted by the serializer
    optional: bool


SECTIONS: Tuple[SectionDef, ...] = (
    SectionDef("header", "number of buses",
               "Number of Buses, Lines, Points, and Segments, Segment Length in Time Units, "
               "Number of UAVs, Surveillance Period", False),
    SectionDef("loads", "load information", "Load Information (Bus No, Load)", False),
    SectionDef("gens", "generation information", "Generation Information (Bus No, Generation)", False),
    SectionDef("lines", "transmission line info", "Transmission Line Info (From-Bus, To-Bus, Reactance)", False),
    SectionDef("capacities", "line capacit", "Line Capacities (MW, One per Line)", True),
    SectionDef("pi_distance", "maximum criticality", "Maximum Criticality (PI Score) Distance", False),
    SectionDef("line_points", "line point set", "Line Point Set", False),
    SectionDef("segments", "segments/links", "Segments/Links (End Points, Fuel Cost Ratio)", False),
    SectionDef("uavs", "uav properties",
               "UAV Properties (Initial Point, Stored Fuel, Fuel Capacity (Watt), Mileage (Fuel/Step), "
               "Hovering Cost (Fuel/Step))", False),
    SectionDef("tc", "threshold time between", "Threshold Time between Two Consecutive Visits to a Point", False),
    SectionDef("resilience", "resiliency requirements", "Resiliency Requirements (k, Threshold Time)", False),
    SectionDef("scores", "minimum criticality scores",
               "Minimum Criticality Scores under Continuous Surveillance and Resilient Surveillance", False),
    SectionDef("base", "base point", "Base Point (Refueling Station)", False),
    SectionDef("cyclic", "cyclic", "Cyclic Plan (Repeat Trajectory)", True),
)

_ORDER = {s.key: i for i, s in enumerate(SECTIONS)}

Row = Tuple[int, List[str]]


def _identify(header: str, line: int) -> str:
    text = header.lower()
    for section in SECTIONS:
        if section.phrase in text:
            return section.key
    raise MalformedSection(f"unknown section '{header.strip()}'", line)


def _split_sections(text: str) -> Tuple[Dict[str, List[Row]], Dict[str, int]]:
    sections: Dict[str, List[Row]] = {}
    where: Dict[str, int] = {}
    current: Optional[str] = None
    for number, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("%", 1)[0].strip()
        if not content:
            continue
        if content.startswith("#"):
            key = _identify(content[1:], number)
            if key in sections:
                raise MalformedSection(f"section '{key}' appears twice", number)
            if current is not None and _ORDER[key] < _ORDER[current]:
                raise MalformedSection(f"section '{key}' is out of order", number)
            sections[key] = []
            where[key] = number
            current = key
            continue
        if current is None:
            raise MalformedSection("data before the first section header", number)
        sections[current].append((number, content.split()))

    if not sections:
        raise MalformedSection("empty scenario")
    for section in SECTIONS:
        if not section.optional and section.key not in sections:
            raise MalformedSection(f"missing section '{section.title}'")
    return sections, where


def _convert(token: str, kind: type, line: int):
    try:
        value = int(token) if kind is int else float(token)
    except ValueError:
        raise MalformedSection(f"expected {kind.__name__}, got '{token}'", line) from None
    if not math.isfinite(value):
        raise MalformedSection(f"expected a finite number, got '{token}'", line)
    return value


def _rows(rows: List[Row], key: str, arity: Tuple[int, ...], kinds: Tuple[type, ...],
          count: Optional[int], where: Dict[str, int]) -> List[Tuple[int, list]]:
    if count is not None and len(rows) != count:
        raise MalformedSection(f"section '{key}' needs {count} rows, got {len(rows)}", where[key])
    parsed = []
    for number, tokens in rows:
        if len(tokens) not in arity:
            raise MalformedSection(
                f"section '{key}' rows take {' or '.join(map(str, arity))} values, got {len(tokens)}", number)
        parsed.append((number, [_convert(t, k, number) for t, k in zip(tokens, kinds)]))
    return parsed


def _single(rows: List[Row], key: str, kinds: Tuple[type, ...], where: Dict[str, int]) -> list:
    return _rows(rows, key, (len(kinds),), kinds, 1, where)[0][1]


def _match_line_points(spec_lines: List[Line], rows: List[Tuple[int, list]],
                       n_buses: int) -> Tuple[Tuple[int, ...], ...]:
    """Point lists may be listed in any order; each is matched to the line sharing its end buses."""
    assigned: List[Optional[Tuple[int, ...]]] = [None] * len(spec_lines)
    for number, pts in rows:
        for end in (pts[0], pts[-1]):
            if not 1 <= end <= n_buses:
                raise DanglingReference(f"point list ends at {end}, not a bus in [1, {n_buses}]", number)
        ends = {pts[0], pts[-1]}
        for idx, line in enumerate(spec_lines):
            if assigned[idx] is None and ends == {line.from_bus, line.to_bus}:
                assigned[idx] = tuple(pts)
                break
        else:
            raise InvariantViolation(
                f"point list {pts[0]}..{pts[-1]} matches no unassigned transmission line", number)
    return tuple(a for a in assigned if a is not None)


def _parse_flag(rows: List[Row], where: Dict[str, int]) -> bool:
    if len(rows) != 1 or len(rows[0][1]) != 1:
        raise MalformedSection("cyclic section takes a single flag", where["cyclic"])
    token = rows[0][1][0].lower()
    if token in ("1", "true", "yes"):
        return True
    if token in ("0", "false", "no"):
        return False
    raise MalformedSection(f"cyclic flag must be 0/1, got '{token}'", rows[0][0])


def parse_scenario(text: str) -> ScenarioSpec:
    """
    Parse scenario text into a validated ScenarioSpec.

    Raises:
        MalformedSection: unknown/missing/duplicated/out-of-order section or wrong arity.
        DanglingReference: a point or bus id out of range.
        InvariantViolation: any other broken invariant (e.g. init_fuel > fuel_cap).
    """
    sections, where = _split_sections(text)

    n_buses, n_lines, n_points, n_segments, seg_len, n_uavs, horizon = _single(
        sections["header"], "header", (int,) * 7, where)
    loads = [tuple(v) for _, v in _rows(sections["loads"], "loads", (2,), (int, float), None, where)]
    gens = [tuple(v) for _, v in _rows(sections["gens"], "gens", (2,), (int, float), None, where)]
    lines = [Line(*v) for _, v in _rows(sections["lines"], "lines", (3,), (int, int, float), n_lines, where)]

    capacities = None
    if "capacities" in sections:
        capacities = tuple(v[0] for _, v in _rows(sections["capacities"], "capacities", (1,), (float,),
                                                  n_lines, where))

    (distance,) = _single(sections["pi_distance"], "pi_distance", (float,), where)

    point_rows = []
    if len(sections["line_points"]) != n_lines:
        raise MalformedSection(f"section 'line_points' needs {n_lines} rows, got {len(sections['line_points'])}",
                               where["line_points"])
    for number, tokens in sections["line_points"]:
        if len(tokens) < 2:
            raise MalformedSection("a line point set needs at least its two end buses", number)
        point_rows.append((number, [_convert(t, int, number) for t in tokens]))
    line_points = _match_line_points(lines, point_rows, n_buses)

    segments = []
    for _, v in _rows(sections["segments"], "segments", (2, 3), (int, int, float), n_segments, where):
        segments.append(Segment(v[0], v[1], v[2] if len(v) == 3 else None))

    uavs = [UavSpec(*v) for _, v in _rows(sections["uavs"], "uavs", (5,), (int,) * 5, n_uavs, where)]
    (tc,) = _single(sections["tc"], "tc", (int,), where)
    k, tr = _single(sections["resilience"], "resilience", (int, int), where)
    cs, rcs = _single(sections["scores"], "scores", (int, int), where)
    (base,) = _single(sections["base"], "base", (int,), where)
    cyclic = _parse_flag(sections["cyclic"], where) if "cyclic" in sections else False

    spec = ScenarioSpec(
        n_buses=n_buses, n_lines=n_lines, n_points=n_points, n_segments=n_segments,
        segment_len=seg_len, n_uavs=n_uavs, horizon_S=horizon,
        loads=tuple(loads), gens=tuple(gens), lines=tuple(lines), pi_distance_D=distance,
        line_points=line_points, segments=tuple(segments), uavs=tuple(uavs),
        tc=tc, k_resilience=k, tr=tr, cs_pct=cs, rcs_pct=rcs, base_point=base,
        cyclic=cyclic, capacities=capacities,
    )
    validate_scenario(spec, where)
    logger.debug(f"parsed scenario: {n_buses} buses, {n_lines} lines, {n_points} points, "
                 f"{n_uavs} UAVs, S={horizon}")
    return spec


def _fmt(value) -> str:
    return repr(float(value))


def serialize_scenario(spec: ScenarioSpec) -> str:
    """Emit `spec` in the canonical sectioned format; parse_scenario inverts it exactly."""
    titles = {s.key: s.title for s in SECTIONS}
    out: List[str] = []

    def section(key: str, rows: List[str]) -> None:
        out.append(f"# {titles[key]}")
        out.extend(rows)
        out.append("")

    section("header", [" ".join(str(v) for v in (
        spec.n_buses, spec.n_lines, spec.n_points, spec.n_segments,
        spec.segment_len, spec.n_uavs, spec.horizon_S))])
    section("loads", [f"{bus} {_fmt(mw)}" for bus, mw in spec.loads])
    section("gens", [f"{bus} {_fmt(mw)}" for bus, mw in spec.gens])
    section("lines", [f"{l.from_bus} {l.to_bus} {_fmt(l.reactance)}" for l in spec.lines])
    if spec.capacities is not None:
        section("capacities", [_fmt(c) for c in spec.capacities])
    section("pi_distance", [_fmt(spec.pi_distance_D)])
    section("line_points", [" ".join(map(str, pts)) for pts in spec.line_points])
    section("segments", [
        f"{s.point_a} {s.point_b}" + ("" if s.cost_ratio is None else f" {_fmt(s.cost_ratio)}")
        for s in spec.segments])
    section("uavs", [f"{u.init_point} {u.init_fuel} {u.fuel_cap} {u.ffuel} {u.hfuel}" for u in spec.uavs])
    section("tc", [str(spec.tc)])
    section("resilience", [f"{spec.k_resilience} {spec.tr}"])
    section("scores", [f"{spec.cs_pct} {spec.rcs_pct}"])
    section("base", [str(spec.base_point)])
    if spec.cyclic:
        section("cyclic", ["1"])
    return "\n".join(out)


def load_scenario(path: str) -> ScenarioSpec:
    """Read a scenario from a file path; '-' reads standard input."""
    if path == "-":
        return parse_scenario(sys.stdin.read())
    with open(path, "r", encoding="utf-8") as handle:
        return parse_scenario(handle.read())
