"""
Exhaustive search oracle for small scenarios.

Enumerates the joint trajectories of the fleet step by step. A branch is cut as soon
as the points whose freshness can still hold no longer weigh enough for the CS target.
A found plan is handed back as a full assignment of the constraint model's variables,
so both backends answer the same question in the same currency.
"""
import itertools
import logging
import time
from dataclasses import dataclass
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

from criticality.ranking import CriticalityMap, integer_weights
from encoder.encode import check_preconditions
from encoder.model import EncodeOptions
from ingest.scenario import ScenarioSpec
from plan.coverage import CoverageReport, coverage_scores
from plan.plan import Event, EventKind, Plan
from solver.decode import plan_assignment
from solver.outcome import LimitExceeded, SolveOutcome, Status
from survnet.fuel import fly_cost, hover_cost, initial_fuel, refuel_level, reserve
from survnet.network import SurvNet

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EnumerationLimits:
    max_points: int = 10
    max_uavs: int = 2
    max_horizon: int = 12
    max_trajectories: int = 200_000


class _At(NamedTuple):
    point: int
    fuel: int
    resumed: bool


class _Option(NamedTuple):
    events: Tuple[Event, ...]
    free: int
    at: Optional[_At]


class _Search:

    def __init__(self, spec: ScenarioSpec, net: SurvNet, crit: CriticalityMap, options: EncodeOptions,
                 cyclic: bool, limits: EnumerationLimits) -> None:
        self.spec = spec
        self.net = net
        self.crit = crit
        self.options = options
        self.scale = options.fixed_point_scale
        self.cyclic = cyclic
        self.limits = limits
        self.S = spec.horizon_S
        self.uavs = tuple(range(1, spec.n_uavs + 1))
        self.weights = integer_weights(crit, options.weight_resolution)
        self.total = sum(self.weights.values())
        self.nodes = 0
        self.report: Optional[CoverageReport] = None

    def options_at(self, u: int, here: _At, s: int) -> List[_Option]:
        uav = self.spec.uavs[u - 1]
        net, S, scale = self.net, self.S, self.scale
        p = here.point
        kind = EventKind.RESUME if here.resumed else EventKind.VISIT
        stay = (Event(s, kind, p, here.fuel),)
        if s == S:
            return [_Option(stay, S + 1, None)]

        out: List[_Option] = []
        for q in net.adj[p]:
            left = here.fuel - fly_cost(uav, net.ratio[(p, q)], scale)
            if left >= reserve(uav, net.tb[q], scale):
                out.append(_Option(stay, s + 1, _At(q, left, False)))
        left = here.fuel - hover_cost(uav, scale)
        if left >= reserve(uav, net.tb[p], scale):
            out.append(_Option(stay, s + 1, _At(p, left, False)))
        if here.resumed:
            return out

        r = s + net.leg(p)
        outbound = (Event(s, EventKind.DEPART, p, here.fuel),) + tuple(
            Event(j, EventKind.TO_BASE) for j in range(s + 1, min(r - 1, S) + 1))
        if r > S:
            if not self.cyclic:
                out.append(_Option(outbound, S + 1, None))
            return out
        at_base = outbound + (Event(r, EventKind.AT_BASE),)
        for q in self.spec.points:
            t = r + net.leg(q)
            level = refuel_level(uav, net.tb[q], scale)
            if t <= S and level >= reserve(uav, net.tb[q], scale):
                inbound = tuple(Event(j, EventKind.FROM_BASE, q) for j in range(r + 1, t))
                out.append(_Option(at_base + inbound, t, _At(q, level, True)))
        if not self.cyclic:
            parked = tuple(Event(j, EventKind.AT_BASE) for j in range(r + 1, S + 1))
            out.append(_Option(at_base + parked, S + 1, None))
        return out

    def _dead(self, steps: Sequence[int], known: int) -> bool:
        """True once the visits seen through step `known` rule out freshness."""
        tc, S = self.spec.tc, self.S
        if not steps:
            return known >= tc
        if steps[0] > tc:
            return True
        for a, b in zip(steps, steps[1:]):
            if b - a > tc and (self.cyclic or a <= S - tc):
                return True
        last = steps[-1]
        return not self.cyclic and last <= S - tc and known - last >= tc

    def hopeless(self, timelines: Dict[int, List[Event]]) -> bool:
        if self.total == 0:
            return False
        known = min(len(events) for events in timelines.values())
        steps: Dict[int, List[int]] = {}
        for events in timelines.values():
            for ev in events:
                if ev.kind.at_point:
                    steps.setdefault(ev.point, []).append(ev.step)
        alive = sum(w for p, w in self.weights.items() if not self._dead(sorted(set(steps.get(p, ()))), known))
        return 100 * alive < self.spec.cs_pct * self.total

    def accept(self, timelines: Dict[int, List[Event]]) -> Optional[Plan]:
        if self.cyclic:
            for u in self.uavs:
                uav, last = self.spec.uavs[u - 1], timelines[u][-1]
                if not last.kind.at_point or last.point != uav.init_point or \
                        last.fuel < initial_fuel(uav, self.scale):
                    return None
        plan = Plan(self.S, {u: tuple(timelines[u]) for u in self.uavs}, self.scale, self.cyclic,
                    self.options.waive_tail_windows)
        report = coverage_scores(plan, self.spec, self.crit, self.options.weight_resolution)
        if self.total:
            surv = sum(self.weights.get(p, 0) for p in report.surveilled_points)
            res = sum(self.weights.get(p, 0) for p in report.resilient_points)
            if 100 * surv < self.spec.cs_pct * self.total or 100 * res < self.spec.rcs_pct * self.total:
                return None
        self.report = report
        return Plan(plan.horizon, plan.timelines, plan.fuel_scale, plan.cyclic, plan.waive_tail_windows,
                    report.surveilled_points, report.resilient_points)

    def search(self, free: Dict[int, int], at: Dict[int, Optional[_At]],
               timelines: Dict[int, List[Event]]) -> Optional[Plan]:
        self.nodes += 1
        if self.nodes > self.limits.max_trajectories:
            raise LimitExceeded(f"search explored more than {self.limits.max_trajectories} partial plans")
        s = min(free.values())
        if s > self.S:
            return self.accept(timelines)
        deciders = [u for u in self.uavs if free[u] == s]
        choices = [self.options_at(u, at[u], s) for u in deciders]
        for combo in itertools.product(*choices):
            nfree, nat = dict(free), dict(at)
            ntimelines = dict(timelines)
            for u, option in zip(deciders, combo):
                nfree[u], nat[u] = option.free, option.at
                ntimelines[u] = timelines[u] + list(option.events)
            if self.hopeless(ntimelines):
                continue
            found = self.search(nfree, nat, ntimelines)
            if found is not None:
                return found
        return None

    def run(self) -> Optional[Plan]:
        free = {u: 1 for u in self.uavs}
        at = {u: _At(uav.init_point, initial_fuel(uav, self.scale), False)
              for u, uav in zip(self.uavs, self.spec.uavs)}
        return self.search(free, at, {u: [] for u in self.uavs})


def check_limits(spec: ScenarioSpec, limits: EnumerationLimits) -> None:
    for what, size, cap in (("points", spec.n_points, limits.max_points), ("UAVs", spec.n_uavs, limits.max_uavs),
                            ("steps", spec.horizon_S, limits.max_horizon)):
        if size > cap:
            raise LimitExceeded(f"{size} {what} exceed the enumeration limit of {cap}")


def solve_enumerative(spec: ScenarioSpec, net: SurvNet, crit: CriticalityMap,
                      options: Optional[EncodeOptions] = None,
                      limits: Optional[EnumerationLimits] = None) -> SolveOutcome:
    """
    Decide the scenario by exhaustive search.

    Raises:
        LimitExceeded: the scenario or the search outgrows `limits`.
        EncodingError: the scenario fails the encoder's preconditions.
    """
    options = options or EncodeOptions()
    limits = limits or EnumerationLimits()
    check_limits(spec, limits)
    check_preconditions(spec, net, options.fixed_point_scale)
    search = _Search(spec, net, crit, options, options.cyclic or spec.cyclic, limits)

    start = time.perf_counter()
    plan = search.run()
    elapsed = time.perf_counter() - start
    stats = {"nodes": float(search.nodes)}
    logger.info(f"enumeration: {'sat' if plan else 'unsat'} after {search.nodes} nodes in {elapsed:.2f}s")
    if plan is None:
        return SolveOutcome(Status.UNSAT, wall_time=elapsed, backend="enumerative", stats=stats)
    assignment = plan_assignment(plan, spec, net, search.report)
    return SolveOutcome(Status.SAT, assignment, wall_time=elapsed, n_variables=len(assignment),
                        backend="enumerative", stats=stats)
