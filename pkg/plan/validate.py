"""
Independent plan validator.

Every rule is re-checked procedurally from the plan's events; nothing here is shared
with the constraint encoder, so an encoding slip cannot certify its own output.

Rules reported: start, adjacency, fuel, reserve, refuel-window, cyclic, freshness,
resilience, coverage.
"""
import dataclasses
import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

from prettytable import PrettyTable

from criticality.ranking import CriticalityMap
from ingest.scenario import ScenarioSpec
from plan.coverage import coverage_scores
from plan.plan import Event, EventKind, MalformedPlan, Plan
from survnet.fuel import fly_cost, hover_cost, initial_fuel, refuel_level, reserve
from survnet.network import SurvNet

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Violation:
    rule: str
    message: str
    uav: Optional[int] = None
    point: Optional[int] = None
    step: Optional[int] = None

    def __str__(self) -> str:
        where = ", ".join(f"{name} {value}" for name, value in
                          (("UAV", self.uav), ("point", self.point), ("step", self.step)) if value is not None)
        return f"[{self.rule}] {where}: {self.message}" if where else f"[{self.rule}] {self.message}"


def display_violations(violations: List[Violation]) -> None:
    table = PrettyTable()
    table.field_names = ["Rule", "UAV", "Point", "Step", "Message"]
    for v in violations:
        table.add_row([v.rule, v.uav or "", v.point or "", v.step or "", v.message])
    print(table)


class _Trip:
    def __init__(self, depart: int, base_step: int) -> None:
        self.depart = depart
        self.base_step = base_step
        self.target: Optional[int] = None
        self.parked = False


def _check_fleet(plan: Plan, spec: ScenarioSpec, net: SurvNet) -> None:
    plan.check_shape()
    if plan.horizon != spec.horizon_S:
        raise MalformedPlan(f"plan horizon {plan.horizon} differs from the scenario's {spec.horizon_S}")
    if set(plan.uavs) != set(range(1, spec.n_uavs + 1)):
        raise MalformedPlan(f"plan UAVs {list(plan.uavs)} do not match the fleet of {spec.n_uavs}")
    for u in plan.uavs:
        for ev in plan.timelines[u]:
            if ev.point is not None and ev.point not in net.tb:
                raise MalformedPlan(f"UAV {u} step {ev.step} names unknown point {ev.point}")


def _uav_violations(plan: Plan, spec: ScenarioSpec, net: SurvNet, u: int) -> List[Violation]:
    uav = spec.uavs[u - 1]
    scale = plan.fuel_scale
    out: List[Violation] = []

    def flag(rule: str, ev: Event, message: str) -> None:
        out.append(Violation(rule, message, u, ev.point, ev.step))

    prev: Optional[Event] = None
    trip: Optional[_Trip] = None
    for ev in plan.timelines[u]:
        s = ev.step
        if trip is not None:
            broken: Optional[str] = None
            if s < trip.base_step:
                if ev.kind != EventKind.TO_BASE:
                    broken = f"expected TO_BASE until the base at step {trip.base_step}"
            elif s == trip.base_step:
                if ev.kind != EventKind.AT_BASE:
                    broken = "expected AT_BASE (refuel)"
            elif ev.kind == EventKind.AT_BASE and trip.target is None:
                trip.parked = True
            elif trip.parked:
                broken = "a parked UAV must stay at the base"
            elif ev.kind == EventKind.FROM_BASE:
                if trip.target is None:
                    trip.target = ev.point
                if ev.point != trip.target or s >= trip.base_step + net.leg(ev.point):
                    flag("refuel-window", ev, f"return leg to point {trip.target} is inconsistent")
            elif ev.kind == EventKind.RESUME:
                due = trip.base_step + net.leg(ev.point)
                if (trip.target is not None and trip.target != ev.point) or s != due:
                    flag("refuel-window", ev, f"resuming at point {ev.point} is due at step {due}")
                level = refuel_level(uav, net.tb[ev.point], scale)
                if ev.fuel != level:
                    flag("fuel", ev, f"refuelled ledger should read {level}, got {ev.fuel}")
                if ev.fuel < reserve(uav, net.tb[ev.point], scale):
                    flag("reserve", ev, "fuel below the reserve needed to reach the base")
                trip, prev = None, ev
            else:
                broken = f"{ev.kind.value} during a refuel trip"
            if broken is None:
                continue
            flag("refuel-window", ev, broken)
            trip, prev = None, None
            # a visit or departure that breaks a trip still gets the ordinary checks
            if ev.kind not in (EventKind.VISIT, EventKind.DEPART):
                continue

        if ev.kind in (EventKind.TO_BASE, EventKind.AT_BASE, EventKind.FROM_BASE, EventKind.RESUME):
            flag("refuel-window", ev, f"{ev.kind.value} without a preceding departure")
            prev = None
            continue

        if s == 1:
            if ev.point != uav.init_point or ev.fuel != initial_fuel(uav, scale):
                flag("start", ev, f"must start at point {uav.init_point} with {initial_fuel(uav, scale)}")
        elif prev is not None:
            if prev.point == ev.point:
                expected = prev.fuel - hover_cost(uav, scale)
            elif net.adjacent(prev.point, ev.point):
                expected = prev.fuel - fly_cost(uav, net.ratio[(prev.point, ev.point)], scale)
            else:
                flag("adjacency", ev, f"point {ev.point} is not adjacent to point {prev.point}")
                expected = None
            if expected is not None and ev.fuel != expected:
                flag("fuel", ev, f"ledger should read {expected}, got {ev.fuel}")
        if ev.fuel < reserve(uav, net.tb[ev.point], scale):
            flag("reserve", ev, "fuel below the reserve needed to reach the base")
        prev = ev
        if ev.kind == EventKind.DEPART:
            trip = _Trip(s, s + net.leg(ev.point))

    if trip is not None and trip.target is not None:
        flag("refuel-window", plan.timelines[u][-1], f"return to point {trip.target} runs past the horizon")
    if plan.cyclic:
        last = plan.timelines[u][-1]
        if not last.kind.at_point or last.point != uav.init_point or last.fuel < initial_fuel(uav, scale):
            flag("cyclic", last, f"a repeatable plan must end at point {uav.init_point} "
                                 f"with at least {initial_fuel(uav, scale)}")
    return out


def required_mode(plan: Plan, spec: ScenarioSpec, cyclic: bool = False,
                  waive_tail_windows: bool = True) -> Tuple[Plan, List[Violation]]:
    """
    Re-label `plan` with the mode it has to meet: cyclic when the scenario or the caller
    asks for it, tail windows waived as the caller says.

    Returns:
        The re-labelled plan, and a violation for each header field that disagrees.
    """
    cyclic = cyclic or spec.cyclic
    violations: List[Violation] = []
    if plan.cyclic != cyclic:
        violations.append(Violation("cyclic", f"plan is marked cyclic={int(plan.cyclic)} "
                                              f"but must be checked with cyclic={int(cyclic)}"))
    if plan.waive_tail_windows != waive_tail_windows:
        violations.append(Violation("resilience", f"plan is marked waive_tail_windows={int(plan.waive_tail_windows)} "
                                                  f"but must be checked with {int(waive_tail_windows)}"))
    if violations:
        plan = dataclasses.replace(plan, cyclic=cyclic, waive_tail_windows=waive_tail_windows)
    return plan, violations


def validate_structure(plan: Plan, spec: ScenarioSpec, net: SurvNet, cyclic: bool = False,
                       waive_tail_windows: bool = True) -> List[Violation]:
    """Movement, fuel and refuel rules only."""
    _check_fleet(plan, spec, net)
    plan, violations = required_mode(plan, spec, cyclic, waive_tail_windows)
    for u in plan.uavs:
        violations.extend(_uav_violations(plan, spec, net, u))
    return violations


def validate(plan: Plan, spec: ScenarioSpec, net: SurvNet, crit: CriticalityMap,
             weight_resolution: int = 10000, cyclic: bool = False,
             waive_tail_windows: bool = True) -> List[Violation]:
    """
    Re-check every plan rule in the mode the scenario and the caller require, whatever
    the plan header says (see required_mode).

    Returns:
        Violations in UAV order then coverage; empty iff the plan is valid.

    Raises:
        MalformedPlan: the plan does not fit the scenario (horizon, fleet, point ids, event shape).
    """
    _check_fleet(plan, spec, net)
    plan, violations = required_mode(plan, spec, cyclic, waive_tail_windows)
    violations.extend(validate_structure(plan, spec, net, plan.cyclic, plan.waive_tail_windows))
    report = coverage_scores(plan, spec, crit, weight_resolution)
    for p in sorted((plan.claimed_surveilled or frozenset()) - report.surveilled_points):
        violations.append(Violation("freshness", f"claimed surveilled but a gap exceeds TC={spec.tc}", point=p))
    for p in sorted((plan.claimed_resilient or frozenset()) - report.resilient_points):
        violations.append(Violation("resilience", f"claimed resilient but no {spec.k_resilience + 1}-UAV "
                                                  f"chain within TR={spec.tr}", point=p))
    if report.cs_achieved < spec.cs_pct:
        violations.append(Violation("coverage", f"continuous coverage {report.cs_achieved:.2f}% "
                                                f"below {spec.cs_pct}%"))
    if report.rcs_achieved < spec.rcs_pct:
        violations.append(Violation("coverage", f"resilient coverage {report.rcs_achieved:.2f}% "
                                                f"below {spec.rcs_pct}%"))
    logger.info(f"validation: {len(violations)} violations")
    return violations
