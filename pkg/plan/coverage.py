"""
Coverage scoring recomputed from a plan's raw visit log.

Surveilled: the first visit falls within TC and every visit up to S - TC is followed
by another within TC (cyclic plans: every circular gap is at most TC).

Resilient: surveilled, plus a chain of anchor visits starting within TR in which every
anchor up to S - TR has a successor within TR. An anchor is a visit whose window
[s, s + TR] holds visits by k + 1 distinct UAVs, or whose window runs past S when tail
windows are waived. Cyclic plans wrap windows and need circular anchor gaps of at most TR.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from prettytable import PrettyTable

from criticality.ranking import CriticalityMap, integer_weights
from ingest.scenario import ScenarioSpec
from plan.plan import Plan

logger = logging.getLogger(__name__)


def window_steps(s: int, tr: int, horizon: int, cyclic: bool) -> FrozenSet[int]:
    if cyclic:
        return frozenset((s + i - 1) % horizon + 1 for i in range(tr + 1))
    return frozenset(range(s, min(s + tr, horizon) + 1))


def is_waived(s: int, tr: int, horizon: int, cyclic: bool, waive_tail: bool) -> bool:
    return waive_tail and not cyclic and s + tr > horizon


def _circular_ok(steps: Sequence[int], gap: int, horizon: int) -> bool:
    if not steps:
        return False
    ordered = sorted(steps)
    gaps = [b - a for a, b in zip(ordered, ordered[1:])]
    gaps.append(ordered[0] + horizon - ordered[-1])
    return max(gaps) <= gap


def is_surveilled(steps: Iterable[int], tc: int, horizon: int, cyclic: bool = False) -> bool:
    ordered = sorted(set(steps))
    if cyclic:
        return _circular_ok(ordered, tc, horizon)
    if not ordered or ordered[0] > tc:
        return False
    for a, b in zip(ordered, ordered[1:]):
        if a <= horizon - tc and b - a > tc:
            return False
    return ordered[-1] > horizon - tc


def anchor_chain(anchors: Iterable[int], tr: int, horizon: int, cyclic: bool = False) -> Optional[Tuple[int, ...]]:
    """A valid resilience chain over `anchors`, or None."""
    ordered = sorted(set(anchors))
    if cyclic:
        return tuple(ordered) if _circular_ok(ordered, tr, horizon) else None
    # nxt[e]: a later anchor continuing a valid chain from e; None when e needs no successor
    good: Dict[int, Optional[int]] = {}
    for e in reversed(ordered):
        if e > horizon - tr:
            good[e] = None
            continue
        for f in ordered:
            if e < f <= e + tr and f in good:
                good[e] = f
                break
    starts = [e for e in ordered if e <= tr and e in good]
    if not starts:
        return None
    chain = [starts[0]]
    while good[chain[-1]] is not None:
        chain.append(good[chain[-1]])
    return tuple(chain)


def resilient_anchors(log: Sequence[Tuple[int, int]], k: int, tr: int, horizon: int,
                      cyclic: bool = False, waive_tail: bool = True) -> FrozenSet[int]:
    """Visit steps of one point that can anchor a resilient chain."""
    by_step: Dict[int, set] = {}
    for step, u in log:
        by_step.setdefault(step, set()).add(u)
    anchors = set()
    for s in by_step:
        if is_waived(s, tr, horizon, cyclic, waive_tail):
            anchors.add(s)
            continue
        seen = set()
        for t in window_steps(s, tr, horizon, cyclic):
            seen |= by_step.get(t, set())
        if len(seen) >= k + 1:
            anchors.add(s)
    return frozenset(anchors)


@dataclass(frozen=True)
class CoverageReport:
    """
    Attributes:
        surveilled_points, resilient_points: recomputed point sets.
        cs_achieved, rcs_achieved: weighted shares in percent.
        visit_log: point -> (step, uav) pairs.
        by_level: level -> (points, surveilled, resilient) counts.
        chains: resilient point -> the anchor chain witnessing it.
        weights: integer point weights the shares were computed with.
    """
    surveilled_points: FrozenSet[int]
    resilient_points: FrozenSet[int]
    cs_achieved: float
    rcs_achieved: float
    visit_log: Dict[int, Tuple[Tuple[int, int], ...]]
    by_level: Dict[int, Tuple[int, int, int]] = field(default_factory=dict)
    chains: Dict[int, Tuple[int, ...]] = field(default_factory=dict)
    weights: Dict[int, int] = field(default_factory=dict)

    def meets(self, cs_pct: int, rcs_pct: int) -> bool:
        return self.cs_achieved >= cs_pct and self.rcs_achieved >= rcs_pct

    def display(self) -> None:
        table = PrettyTable()
        table.field_names = ["Level", "Points", "Surveilled", "Resilient"]
        for level in sorted(self.by_level, reverse=True):
            table.add_row([level, *self.by_level[level]])
        print(table)
        print(f"{len(self.surveilled_points)} points under continuous surveillance "
              f"({self.cs_achieved:.2f}% of criticality), {len(self.resilient_points)} under resilient "
              f"surveillance ({self.rcs_achieved:.2f}%)")


def _share(points: Iterable[int], weights: Dict[int, int]) -> float:
    total = sum(weights.values())
    if total == 0:
        return 100.0
    return 100.0 * sum(weights.get(p, 0) for p in points) / total


def coverage_scores(plan: Plan, spec: ScenarioSpec, crit: CriticalityMap,
                    weight_resolution: int = 10000) -> CoverageReport:
    S = plan.horizon
    log = plan.visits()
    surv = set()
    res = set()
    chains: Dict[int, Tuple[int, ...]] = {}
    for p in spec.points:
        entries = log.get(p, [])
        if not is_surveilled([s for s, _ in entries], spec.tc, S, plan.cyclic):
            continue
        surv.add(p)
        anchors = resilient_anchors(entries, spec.k_resilience, spec.tr, S, plan.cyclic, plan.waive_tail_windows)
        chain = anchor_chain(anchors, spec.tr, S, plan.cyclic)
        if chain is not None:
            res.add(p)
            chains[p] = chain

    weights = integer_weights(crit, weight_resolution)
    by_level: Dict[int, List[int]] = {}
    for p in spec.points:
        counts = by_level.setdefault(crit.point_level.get(p, 0), [0, 0, 0])
        counts[0] += 1
        counts[1] += p in surv
        counts[2] += p in res

    report = CoverageReport(
        frozenset(surv), frozenset(res), _share(surv, weights), _share(res, weights),
        {p: tuple(entries) for p, entries in log.items()},
        {level: tuple(c) for level, c in by_level.items()}, chains, weights)
    logger.info(f"coverage: {len(surv)} surveilled ({report.cs_achieved:.2f}%), "
                f"{len(res)} resilient ({report.rcs_achieved:.2f}%)")
    return report
