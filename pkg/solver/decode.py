"""
Translate between solver assignments and plans.

`decode` reads a satisfying assignment back into per-UAV event timelines;
`plan_assignment` goes the other way, so a plan found by search can be checked
against every assertion of the constraint model.
"""
import logging
from typing import Dict, List, Optional

from encoder.model import (
    EncodeOptions,
    away,
    fly,
    fuel,
    hover,
    refuel,
    refuel_to,
    res_surveilled,
    res_visited,
    surveilled,
    to_refuel,
    visit,
    visit_during,
    visited,
)
from encoder.terms import Var
from ingest.scenario import ScenarioSpec
from plan.coverage import CoverageReport, window_steps
from plan.plan import Event, EventKind, Plan
from plan.validate import validate_structure
from solver.outcome import InconsistentModel, Value
from survnet.network import SurvNet

logger = logging.getLogger(__name__)


class _Reader:

    def __init__(self, assignment: Dict[str, Value], spec: ScenarioSpec) -> None:
        self.assignment = assignment
        self.spec = spec

    def __call__(self, var: Var) -> bool:
        return bool(self.assignment.get(var.name, False))

    def fuel(self, u: int, s: int) -> int:
        value = self.assignment.get(fuel(u, s).name)
        if isinstance(value, bool) or not isinstance(value, int):
            raise InconsistentModel(f"model gives no fuel value for UAV {u} at step {s}")
        return value

    def points_of(self, u: int, s: int) -> List[int]:
        return [p for p in self.spec.points if self(visit(u, p, s))]


def _trip_event(read: _Reader, u: int, s: int, base_step: int) -> Event:
    if s < base_step:
        return Event(s, EventKind.TO_BASE)
    if s == base_step:
        return Event(s, EventKind.AT_BASE)
    for t in range(s + 1, read.spec.horizon_S + 1):
        here = read.points_of(u, t)
        if here:
            if read(refuel_to(u, here[0], t)):
                return Event(s, EventKind.FROM_BASE, here[0])
            break
    return Event(s, EventKind.AT_BASE)


def decode(assignment: Dict[str, Value], spec: ScenarioSpec, net: SurvNet,
           options: Optional[EncodeOptions] = None) -> Plan:
    """
    Build the plan a satisfying assignment describes.

    Raises:
        InconsistentModel: the assignment breaks the frame, the channelling between
            flag families, or a movement rule the plan validator checks.
    """
    options = options or EncodeOptions()
    read = _Reader(assignment, spec)
    S = spec.horizon_S
    timelines = {}
    for u in range(1, spec.n_uavs + 1):
        events: List[Event] = []
        base_step: Optional[int] = None
        for s in range(1, S + 1):
            here = read.points_of(u, s)
            gone = read(away(u, s))
            if len(here) + gone != 1:
                raise InconsistentModel(f"UAV {u} at step {s}: points {here}, away={gone}")
            if gone:
                if base_step is None:
                    raise InconsistentModel(f"UAV {u} is away at step {s} without departing")
                events.append(_trip_event(read, u, s, base_step))
                continue
            p = here[0]
            departs, resumes = read(to_refuel(u, p, s)), read(refuel_to(u, p, s))
            if departs and resumes:
                raise InconsistentModel(f"UAV {u} both departs and resumes at point {p}, step {s}")
            kind = EventKind.DEPART if departs else EventKind.RESUME if resumes else EventKind.VISIT
            events.append(Event(s, kind, p, read.fuel(u, s)))
            base_step = s + net.leg(p) if departs else None
        timelines[u] = tuple(events)

    for p in spec.points:
        for s in range(1, S + 1):
            anyone = any(read(visit(u, p, s)) for u in timelines)
            if read(visited(p, s)) != anyone:
                raise InconsistentModel(f"visited flag of point {p} at step {s} disagrees with the visits")

    plan = Plan(S, timelines, options.fixed_point_scale, options.cyclic or spec.cyclic,
                options.waive_tail_windows,
                frozenset(p for p in spec.points if read(surveilled(p))),
                frozenset(p for p in spec.points if read(res_surveilled(p))))
    violations = validate_structure(plan, spec, net, options.cyclic, options.waive_tail_windows)
    if violations:
        shown = "; ".join(str(v) for v in violations[:3])
        raise InconsistentModel(f"decoded plan breaks {len(violations)} movement rules: {shown}")
    logger.debug(f"decoded a plan with {sum(plan.refuel_trips(u) for u in plan.uavs)} refuel trips")
    return plan


def plan_assignment(plan: Plan, spec: ScenarioSpec, net: SurvNet, report: CoverageReport) -> Dict[str, Value]:
    """
    Every variable of the constraint model that the plan sets, with its value.

    Absent boolean variables are false. `report` must be the plan's own coverage report.
    """
    a: Dict[str, Value] = {}

    def on(var: Var) -> None:
        a[var.name] = True

    for u in plan.uavs:
        prev: Optional[Event] = None
        ledger = 0
        for ev in plan.timelines[u]:
            s = ev.step
            if ev.kind.at_point:
                on(visit(u, ev.point, s))
                ledger = ev.fuel
                if ev.kind == EventKind.RESUME:
                    on(refuel_to(u, ev.point, s))
                elif prev is not None and prev.kind.at_point:
                    on(hover(u, ev.point, s) if prev.point == ev.point else fly(u, ev.point, s))
                if ev.kind == EventKind.DEPART:
                    on(to_refuel(u, ev.point, s))
            else:
                on(away(u, s))
                if ev.kind == EventKind.AT_BASE and prev is not None and \
                        prev.kind in (EventKind.DEPART, EventKind.TO_BASE):
                    on(refuel(u, s))
            a[fuel(u, s).name] = ledger
            prev = ev

    for p, entries in plan.visits().items():
        for s, _ in entries:
            on(visited(p, s))
        for s in range(1, plan.horizon + 1):
            window = window_steps(s, spec.tr, plan.horizon, plan.cyclic)
            for t, u in entries:
                if t in window:
                    on(visit_during(u, p, s))
    for p in report.surveilled_points:
        on(surveilled(p))
    for p in report.resilient_points:
        on(res_surveilled(p))
        for s in report.chains[p]:
            on(res_visited(p, s))
    return a
