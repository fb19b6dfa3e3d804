"""
Build the constraint model of a surveillance plan.

Rule families, each emitted under its own group name:
- init: start point and fuel of every UAV; step-1 pins.
- frame: each UAV is at exactly one point or away at every step.
- dynamics: a visit is a hover, a flight over one segment, or a return from the base.
- refuel: departure, refuel and return events bracket every away stretch.
- visited / freshness: per-point visit flags and the TC recurrence.
- resilience: (k+1) distinct UAVs in every TR window anchored at a resilient visit.
- coverage: weighted surveillance shares against CS and RCS.
- cyclic: the plan ends where it started with at least its starting fuel.

Refuel timing: a UAV leaving point p at step s reaches the base at s + leg(p) and
resumes at p' leg(p') steps later, where leg(p) = max(tb[p], 1).
"""
import logging
from typing import Dict, List, Optional, Tuple

from criticality.ranking import CriticalityMap, integer_weights
from encoder.model import (
    ConstraintModel,
    EmptyFleet,
    EncodeOptions,
    HorizonTooShort,
    StrandedUav,
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
from encoder.terms import TRUE, Term, Var, conj, disj, implies, linear, neg
from ingest.scenario import ScenarioSpec
from survnet.fuel import fly_cost, hover_cost, initial_fuel, refuel_level, reserve
from survnet.network import SurvNet

logger = logging.getLogger(__name__)


class _Builder:
    def __init__(self, spec: ScenarioSpec, net: SurvNet, options: EncodeOptions, cyclic: bool) -> None:
        self.spec = spec
        self.net = net
        self.scale = options.fixed_point_scale
        self.waive = options.waive_tail_windows
        self.cyclic = cyclic
        self.S = spec.horizon_S
        self.uavs = range(1, spec.n_uavs + 1)
        self.points = tuple(spec.points)
        self.steps = range(1, self.S + 1)
        self.declarations: List[Var] = []
        self.assertions: List[Tuple[str, Term]] = []

    def add(self, group: str, term: Term) -> None:
        if term == TRUE:
            return
        self.assertions.append((group, term))

    def uav(self, u: int):
        return self.spec.uavs[u - 1]

    def wrap(self, s: int) -> int:
        return (s - 1) % self.S + 1

    def following(self, s: int, span: int) -> List[int]:
        """Steps after s within `span`, wrapped in cyclic mode."""
        if self.cyclic:
            return sorted({self.wrap(s + i) for i in range(1, span + 1)})
        return list(range(s + 1, min(s + span, self.S) + 1))

    def window(self, s: int) -> List[int]:
        if self.cyclic:
            return sorted({self.wrap(s + i) for i in range(0, self.spec.tr + 1)})
        return list(range(s, min(s + self.spec.tr, self.S) + 1))

    def waived(self, s: int) -> bool:
        return not self.cyclic and self.waive and s + self.spec.tr > self.S

    def recurrence_steps(self, span: int) -> range:
        return self.steps if self.cyclic else range(1, self.S - span + 1)

    def declare(self) -> None:
        d = self.declarations
        for family in (visit, hover, fly, to_refuel, refuel_to, visit_during):
            d.extend(family(u, p, s) for u in self.uavs for p in self.points for s in self.steps)
        for family in (refuel, away):
            d.extend(family(u, s) for u in self.uavs for s in self.steps)
        for family in (visited, res_visited):
            d.extend(family(p, s) for p in self.points for s in self.steps)
        d.extend(surveilled(p) for p in self.points)
        d.extend(res_surveilled(p) for p in self.points)
        d.extend(fuel(u, s) for u in self.uavs for s in self.steps)

    def initial(self) -> None:
        for u in self.uavs:
            spec_u = self.uav(u)
            self.add("init", visit(u, spec_u.init_point, 1))
            self.add("init", linear([(1, fuel(u, 1))], "=", initial_fuel(spec_u, self.scale)))
            self.add("init", neg(away(u, 1)))
            self.add("init", neg(refuel(u, 1)))
            for p in self.points:
                for family in (hover, fly, refuel_to):
                    self.add("init", neg(family(u, p, 1)))

    def frame(self) -> None:
        for u in self.uavs:
            for s in self.steps:
                terms = [(1, visit(u, p, s)) for p in self.points] + [(1, away(u, s))]
                self.add("frame", linear(terms, "=", 1))
                if s >= 2:
                    came_from = [to_refuel(u, p, s - 1) for p in self.points]
                    self.add("frame", implies(away(u, s), disj(away(u, s - 1), *came_from)))

    def _reserve(self, u: int, p: int, s: int) -> Term:
        return linear([(1, fuel(u, s))], ">=", reserve(self.uav(u), self.net.tb[p], self.scale))

    def _spent(self, u: int, s: int, cost: int) -> Term:
        return linear([(1, fuel(u, s)), (-1, fuel(u, s - 1))], "=", -cost)

    def dynamics(self) -> None:
        for u in self.uavs:
            spec_u = self.uav(u)
            for p in self.points:
                neighbours = self.net.adj[p]
                for s in self.steps[1:]:
                    v = visit(u, p, s)
                    self.add("dynamics", implies(v, disj(hover(u, p, s), fly(u, p, s), refuel_to(u, p, s))))
                    self.add("dynamics", implies(hover(u, p, s), conj(
                        v, visit(u, p, s - 1), self._spent(u, s, hover_cost(spec_u, self.scale)),
                        self._reserve(u, p, s))))
                    self.add("dynamics", implies(fly(u, p, s), conj(
                        v, disj(*(visit(u, q, s - 1) for q in neighbours)), self._reserve(u, p, s))))
                    for q in neighbours:
                        cost = fly_cost(spec_u, self.net.ratio[(q, p)], self.scale)
                        self.add("dynamics", implies(conj(fly(u, p, s), visit(u, q, s - 1)),
                                                     self._spent(u, s, cost)))

    def refuelling(self) -> None:
        net, S = self.net, self.S
        for u in self.uavs:
            spec_u = self.uav(u)
            for p in self.points:
                for s in self.steps:
                    r = s + net.leg(p)
                    outbound = [away(u, j) for j in range(s + 1, min(r, S) + 1)]
                    at_base = refuel(u, r) if r <= S else TRUE
                    self.add("refuel", implies(to_refuel(u, p, s), conj(visit(u, p, s), *outbound, at_base)))

            for r in self.steps[1:]:
                departures = [to_refuel(u, p, r - net.leg(p)) for p in self.points if r - net.leg(p) >= 1]
                self.add("refuel", implies(refuel(u, r), conj(away(u, r), disj(*departures))))
                returns = [refuel_to(u, q, r + net.leg(q)) for q in self.points if r + net.leg(q) <= S]
                parked = conj(*(away(u, j) for j in range(r + 1, S + 1)))
                self.add("refuel", implies(refuel(u, r), disj(*returns, parked)))

            for q in self.points:
                level = refuel_level(spec_u, net.tb[q], self.scale)
                for t in self.steps[1:]:
                    r = t - net.leg(q)
                    if r < 1:
                        self.add("refuel", neg(refuel_to(u, q, t)))
                        continue
                    inbound = [away(u, j) for j in range(r, t)]
                    self.add("refuel", implies(refuel_to(u, q, t), conj(
                        visit(u, q, t), neg(to_refuel(u, q, t)), refuel(u, r), *inbound,
                        linear([(1, fuel(u, t))], "=", level), self._reserve(u, q, t))))

    def freshness(self) -> None:
        tc = self.spec.tc
        for p in self.points:
            for s in self.steps:
                anyone = [visit(u, p, s) for u in self.uavs]
                self.add("visited", implies(visited(p, s), disj(*anyone)))
                for v in anyone:
                    self.add("visited", implies(v, visited(p, s)))
            start = [visited(p, s) for s in range(1, min(tc, self.S) + 1)]
            self.add("freshness", implies(surveilled(p), disj(*start)))
            for s in self.recurrence_steps(tc):
                nxt = [visited(p, j) for j in self.following(s, tc)]
                self.add("freshness", implies(conj(surveilled(p), visited(p, s)), disj(*nxt)))

    def resilience(self) -> None:
        tr, need = self.spec.tr, self.spec.k_resilience + 1
        for p in self.points:
            for s in self.steps:
                window = self.window(s)
                for u in self.uavs:
                    seen = [visit(u, p, j) for j in window]
                    self.add("resilience", implies(visit_during(u, p, s), disj(*seen)))
                self.add("resilience", implies(res_visited(p, s), visited(p, s)))
                if not self.waived(s):
                    distinct = linear([(1, visit_during(u, p, s)) for u in self.uavs], ">=", need)
                    self.add("resilience", implies(res_visited(p, s), distinct))
            self.add("resilience", implies(res_surveilled(p), surveilled(p)))
            start = [res_visited(p, s) for s in range(1, min(tr, self.S) + 1)]
            self.add("resilience", implies(res_surveilled(p), disj(*start)))
            for s in self.recurrence_steps(tr):
                nxt = [res_visited(p, j) for j in self.following(s, tr)]
                self.add("resilience", implies(conj(res_surveilled(p), res_visited(p, s)), disj(*nxt)))

    def coverage(self, weights: Dict[int, int]) -> None:
        total = sum(weights.values())
        if total == 0:
            logger.info("all point weights are zero; coverage requirements are vacuous")
            return
        for pct, flag in ((self.spec.cs_pct, surveilled), (self.spec.rcs_pct, res_surveilled)):
            if pct > 0:
                terms = [(100 * w, flag(p)) for p, w in sorted(weights.items()) if w > 0]
                self.add("coverage", linear(terms, ">=", pct * total))

    def repetition(self) -> None:
        for u in self.uavs:
            spec_u = self.uav(u)
            self.add("cyclic", visit(u, spec_u.init_point, self.S))
            self.add("cyclic", linear([(1, fuel(u, self.S))], ">=", initial_fuel(spec_u, self.scale)))


def check_preconditions(spec: ScenarioSpec, net: SurvNet, scale: int) -> None:
    if spec.n_uavs < 1:
        raise EmptyFleet("the fleet has no UAVs")
    if spec.horizon_S < spec.tc:
        raise HorizonTooShort(f"horizon {spec.horizon_S} is shorter than the freshness threshold {spec.tc}")
    for u, uav in enumerate(spec.uavs, start=1):
        need = reserve(uav, net.tb[uav.init_point], scale)
        if initial_fuel(uav, scale) < need:
            raise StrandedUav(f"UAV {u} starts at point {uav.init_point} with {uav.init_fuel} fuel, "
                              f"short of the {uav.ffuel * net.tb[uav.init_point]} needed to reach the base")


def encode(spec: ScenarioSpec, net: SurvNet, crit: CriticalityMap,
           options: Optional[EncodeOptions] = None) -> ConstraintModel:
    """
    Encode the surveillance requirements of `spec` over its horizon.

    Raises:
        EmptyFleet, HorizonTooShort, StrandedUav
    """
    options = options or EncodeOptions()
    cyclic = options.cyclic or spec.cyclic
    check_preconditions(spec, net, options.fixed_point_scale)
    weights = integer_weights(crit, options.weight_resolution)

    builder = _Builder(spec, net, options, cyclic)
    builder.declare()
    builder.initial()
    builder.frame()
    builder.dynamics()
    builder.refuelling()
    builder.freshness()
    builder.resilience()
    builder.coverage(weights)
    if cyclic:
        builder.repetition()

    model = ConstraintModel(tuple(builder.declarations), tuple(builder.assertions), spec.horizon_S,
                            spec.n_uavs, builder.points, weights, cyclic, options)
    logger.info(f"encoded {len(model.assertions)} assertions over {len(model.declarations)} variables "
                f"(S={spec.horizon_S}, {spec.n_uavs} UAVs, {spec.n_points} points, cyclic={cyclic})")
    return model
