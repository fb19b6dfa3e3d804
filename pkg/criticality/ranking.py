"""
Criticality ranking of lines and points.

Lines are clustered on their performance index with the smallest K whose largest
member-to-center distance stays within D. A line's weight is its cluster center and
its level is the rank of that center (1 = least critical). Points take the largest
weight among the lines they lie on.
"""
import logging
import math
from dataclasses import dataclass, field, replace
from typing import Dict, FrozenSet, Iterable, Mapping, Optional, Sequence, Tuple

from prettytable import PrettyTable

from criticality.kmeans import ClusterResult, kmeans
from powergrid.contingency import PiScores

logger = logging.getLogger(__name__)

# absorbs rounding in cluster means of identical values
DISTANCE_SLACK = 1e-9


class CriticalityError(ValueError):
    pass


class OrphanPoint(CriticalityError):
    pass


@dataclass(frozen=True)
class CriticalityMap:
    """
    Attributes:
        line_pi: the performance index each line was ranked on.
        line_weight: cluster center per line id.
        line_level: 1..K, ascending with the weight.
        K: number of levels.
        line_points: ordered points of each line id (set by point_weights).
        point_weight: largest weight of the selected lines through each point.
        point_level: level of that line, 0 for points on no selected line.
        selected: the lines that contribute point weight; None means all.
    """
    line_pi: Dict[int, float]
    line_weight: Dict[int, float]
    line_level: Dict[int, int]
    K: int
    line_points: Dict[int, Tuple[int, ...]] = field(default_factory=dict)
    point_weight: Dict[int, float] = field(default_factory=dict)
    point_level: Dict[int, int] = field(default_factory=dict)
    selected: Optional[FrozenSet[int]] = None

    def total_point_weight(self) -> float:
        return sum(self.point_weight.values())

    def display(self) -> None:
        table = PrettyTable()
        table.field_names = ["Line", "PI", "Weight", "Level", "Selected"]
        for lid in sorted(self.line_weight):
            chosen = self.selected is None or lid in self.selected
            table.add_row([lid, f"{self.line_pi[lid]:.6f}", f"{self.line_weight[lid]:.6f}",
                           self.line_level[lid], "yes" if chosen else ""])
        print(table)
        print(f"{self.K} criticality levels")


def _levels(result: ClusterResult) -> Dict[int, int]:
    """Cluster index -> level, ranking the distinct centers of occupied clusters."""
    distinct = sorted({result.centers[c] for c in result.occupied()})
    return {c: distinct.index(result.centers[c]) + 1 for c in result.occupied()}


def cluster_within(data: Sequence[float], D: float) -> ClusterResult:
    """Smallest-K clustering whose maximum member-to-center distance is at most D."""
    if D < 0:
        raise ValueError("criticality distance must be non-negative")
    tolerance = DISTANCE_SLACK * max(1.0, max(abs(v) for v in data))
    result = None
    for K in range(1, len(data) + 1):
        result = kmeans(data, K)
        if result.max_distance <= D + tolerance:
            break
    return result


def rank_criticality(pis: PiScores, D: float) -> CriticalityMap:
    lids = sorted(pis.pi)
    if not lids:
        raise CriticalityError("no lines to rank")
    result = cluster_within([pis.pi[lid] for lid in lids], D)
    levels = _levels(result)
    weight = {lid: result.centers[result.assignments[i]] for i, lid in enumerate(lids)}
    level = {lid: levels[result.assignments[i]] for i, lid in enumerate(lids)}
    K = len(set(levels.values()))
    logger.info(f"criticality: {len(lids)} lines in {K} levels (D={D})")
    return CriticalityMap(dict(pis.pi), weight, level, K)


def _project(crit: CriticalityMap, line_points: Mapping[int, Tuple[int, ...]],
             points: Iterable[int], selected: Optional[FrozenSet[int]]) -> CriticalityMap:
    weight: Dict[int, float] = {}
    level: Dict[int, int] = {}
    covered = set()
    for lid, pts in line_points.items():
        covered.update(pts)
        if selected is not None and lid not in selected:
            continue
        for p in pts:
            if p not in weight or crit.line_weight[lid] > weight[p]:
                weight[p] = crit.line_weight[lid]
                level[p] = crit.line_level[lid]
    for p in points:
        if p not in covered:
            raise OrphanPoint(f"point {p} lies on no transmission line")
        weight.setdefault(p, 0.0)
        level.setdefault(p, 0)
    return replace(crit, line_points=dict(line_points), point_weight=weight, point_level=level, selected=selected)


def point_weights(crit: CriticalityMap, line_points: Mapping[int, Tuple[int, ...]],
                  points: Iterable[int]) -> CriticalityMap:
    """
    Give every point the largest weight of the lines through it.

    Args:
        crit: line part from rank_criticality.
        line_points: ordered point list per line id.
        points: every point id of the network.

    Raises:
        OrphanPoint: a point lies on no line.
    """
    return _project(crit, line_points, points, None)


def top_lines(crit: CriticalityMap, fraction: float) -> Tuple[int, ...]:
    """The ceil(fraction * lines) most critical line ids, by weight then PI then id."""
    if not 0 < fraction <= 1:
        raise ValueError(f"line fraction must lie in (0, 1], got {fraction}")
    count = max(1, math.ceil(fraction * len(crit.line_weight) - 1e-9))
    ranked = sorted(crit.line_weight, key=lambda lid: (-crit.line_weight[lid], -crit.line_pi[lid], lid))
    return tuple(ranked[:count])


def restrict_to_lines(crit: CriticalityMap, lines: Iterable[int]) -> CriticalityMap:
    """Recompute point weights so only `lines` contribute; other points weigh 0."""
    if not crit.line_points:
        raise CriticalityError("point weights must be computed before restricting lines")
    selected = frozenset(lines)
    unknown = selected - set(crit.line_weight)
    if unknown:
        raise CriticalityError(f"unknown line ids {sorted(unknown)}")
    return _project(crit, crit.line_points, crit.point_weight, selected)


def integer_weights(crit: CriticalityMap, resolution: int = 10000) -> Dict[int, int]:
    """Point weights scaled so the heaviest point weighs `resolution`, rounded to integers."""
    if resolution < 1:
        raise ValueError("weight resolution must be at least 1")
    top = max(crit.point_weight.values(), default=0.0)
    if top <= 0:
        return {p: 0 for p in crit.point_weight}
    return {p: int(round(w / top * resolution)) for p, w in crit.point_weight.items()}
