"""
k-failure audit.

For every set F of exactly k UAVs, an anchor visit s of a point is killed when no UAV
outside F visits the point within [s, s + TR]. A point passes when it is surveilled
and a resilience chain exists over the anchors no subset kills.
"""
import itertools
import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, Optional, Tuple

from prettytable import PrettyTable

from ingest.scenario import ScenarioSpec
from plan.coverage import anchor_chain, is_surveilled, is_waived, window_steps
from plan.plan import Plan

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SubsetResult:
    removed: FrozenSet[int]
    killed: Tuple[int, ...]
    # largest wait from an anchor to the next surviving visit; None if some anchor goes unanswered
    worst_response: Optional[int]


@dataclass(frozen=True)
class PointAudit:
    point: int
    surveilled: bool
    passed: bool
    subsets: Tuple[SubsetResult, ...]

    def failing_subsets(self) -> Tuple[FrozenSet[int], ...]:
        return tuple(r.removed for r in self.subsets if r.killed)


@dataclass(frozen=True)
class ResilienceAudit:
    k: int
    subsets: Tuple[FrozenSet[int], ...]
    points: Dict[int, PointAudit]

    @property
    def passed_points(self) -> FrozenSet[int]:
        return frozenset(p for p, a in self.points.items() if a.passed)

    def passes(self, points) -> bool:
        return all(self.points[p].passed for p in points)

    def display(self) -> None:
        table = PrettyTable()
        table.field_names = ["Point", "Surveilled", "Passed", "Failing subsets", "Worst response"]
        for p in sorted(self.points):
            audit = self.points[p]
            failing = " ".join("{" + ",".join(map(str, sorted(f))) + "}" for f in audit.failing_subsets())
            responses = [r.worst_response for r in audit.subsets]
            worst = "-" if None in responses or not responses else max(responses)
            table.add_row([p, "yes" if audit.surveilled else "", "PASS" if audit.passed else "FAIL",
                           failing, worst])
        print(table)
        print(f"k={self.k}: {len(self.subsets)} failure subsets, {len(self.passed_points)} points pass")


def inject_failures(plan: Plan, spec: ScenarioSpec, k: Optional[int] = None) -> ResilienceAudit:
    """
    Remove every k-subset of the fleet in turn and audit each point.

    Raises:
        ValueError: k is negative or not smaller than the fleet.
    """
    k = spec.k_resilience if k is None else k
    if not 0 <= k < len(plan.uavs):
        raise ValueError(f"failure audit needs 0 <= k < {len(plan.uavs)}, got {k}")
    S, tr = plan.horizon, spec.tr
    subsets = tuple(frozenset(c) for c in itertools.combinations(plan.uavs, k))
    log = plan.visits()
    points: Dict[int, PointAudit] = {}
    for p in spec.points:
        entries = log.get(p, [])
        steps = sorted({s for s, _ in entries})
        surveilled = is_surveilled(steps, spec.tc, S, plan.cyclic)
        results = []
        dead = set()
        for removed in subsets:
            surviving = sorted({s for s, u in entries if u not in removed})
            killed = []
            worst: Optional[int] = 0
            for s in steps:
                if is_waived(s, tr, S, plan.cyclic, plan.waive_tail_windows):
                    continue
                window = window_steps(s, tr, S, plan.cyclic)
                answers = [(t - s) % S if plan.cyclic else t - s for t in surviving if t in window]
                if not answers:
                    killed.append(s)
                    worst = None
                elif worst is not None:
                    worst = max(worst, min(answers))
            dead.update(killed)
            results.append(SubsetResult(removed, tuple(killed), worst))
        alive = [s for s in steps if s not in dead]
        passed = surveilled and anchor_chain(alive, tr, S, plan.cyclic) is not None
        points[p] = PointAudit(p, surveilled, passed, tuple(results))
    audit = ResilienceAudit(k, subsets, points)
    logger.info(f"failure audit k={k}: {len(subsets)} subsets, {len(audit.passed_points)} points pass")
    return audit
