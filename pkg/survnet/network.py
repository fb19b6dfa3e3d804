"""
Surveillance network built from the scenario segments.

Climb ratios are kept as exact rationals: a segment "15 16 0.95" costs 19/20 of level
flight from 15 to 16 and 20/19 from 16 to 15. Segments given without a ratio are level.

Usage:
    net = build_net(spec)
    net.tb[net.base_point] == 0
"""
import logging
from dataclasses import dataclass
from typing import Dict, Tuple

import networkx as nx
from prettytable import PrettyTable
from sympy import Rational

from ingest.scenario import ScenarioSpec

logger = logging.getLogger(__name__)


class NetworkError(ValueError):
    pass


class DisconnectedNetwork(NetworkError):
    pass


class DuplicateSegment(NetworkError):
    pass


@dataclass(frozen=True)
class SurvNet:
    points: Tuple[int, ...]
    adj: Dict[int, Tuple[int, ...]]
    ratio: Dict[Tuple[int, int], Rational]
    base_point: int
    tb: Dict[int, int]

    def adjacent(self, p: int, q: int) -> bool:
        return q in self.adj[p]

    def cost_ratio(self, p: int, q: int) -> float:
        """Fuel multiplier for flying from p to q."""
        return float(self.ratio[(p, q)])

    def leg(self, p: int) -> int:
        """Steps between p and the base; the base point itself is one step from its station."""
        return max(self.tb[p], 1)

    def graph(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(self.points)
        g.add_edges_from((p, q) for p in self.points for q in self.adj[p])
        return g

    def display(self) -> None:
        table = PrettyTable()
        table.field_names = ["Point", "Neighbours", "TB"]
        for p in self.points:
            table.add_row([p, " ".join(map(str, self.adj[p])), self.tb[p]])
        print(table)


def _exact(ratio) -> Rational:
    # decimal text of the float, so 0.95 becomes 19/20
    return Rational(1) if ratio is None else Rational(repr(float(ratio)))


def time_to_base(graph: nx.Graph, base_point: int) -> Dict[int, int]:
    """Hop count from every point to the base."""
    if not nx.is_connected(graph):
        raise DisconnectedNetwork("surveillance network is not connected")
    lengths = nx.single_source_shortest_path_length(graph, base_point)
    return {p: lengths[p] for p in sorted(graph.nodes)}


def build_net(spec: ScenarioSpec) -> SurvNet:
    """
    Raises:
        DuplicateSegment: the same pair of points is linked twice.
        DisconnectedNetwork: some point cannot reach the base.
        NetworkError: a segment links a point to itself.
    """
    g = nx.Graph()
    g.add_nodes_from(spec.points)
    ratio: Dict[Tuple[int, int], Rational] = {}
    for seg in spec.segments:
        a, b = seg.point_a, seg.point_b
        if a == b:
            raise NetworkError(f"segment links point {a} to itself")
        if g.has_edge(a, b):
            raise DuplicateSegment(f"segment {a}-{b} appears more than once")
        g.add_edge(a, b)
        forward = _exact(seg.cost_ratio)
        ratio[(a, b)] = forward
        ratio[(b, a)] = 1 / forward
    tb = time_to_base(g, spec.base_point)
    adj = {p: tuple(sorted(g.neighbors(p))) for p in spec.points}
    logger.debug(f"surveillance network: {g.number_of_nodes()} points, {g.number_of_edges()} segments, "
                 f"farthest point {max(tb.values())} steps from base {spec.base_point}")
    return SurvNet(tuple(spec.points), adj, ratio, spec.base_point, tb)
