"""
Grid model for DC contingency analysis.

Classes:
- GridOptions: configuration for slack choice, capacity defaults and the PI exponent.
- Grid: buses, lines and net injections of a balanced transmission grid.

Functions:
- grid_from_scenario(spec, options): builds the Grid of a parsed scenario.

Lines are addressed by 1-based ids in file order, matching the scenario format.
"""
import logging
from dataclasses import dataclass
from typing import Dict, Iterable, Optional, Tuple

import networkx as nx

from ingest.scenario import Line, ScenarioSpec

logger = logging.getLogger(__name__)

# injections are in MW; angles are reported on this base
BASE_MVA = 100.0


class GridError(ValueError):
    pass


class SingularMatrix(GridError):
    pass


class Unbalanced(GridError):
    pass


class IslandingOutage(GridError):
    pass


class SelfOutage(GridError):
    pass


class GridOptions:
    def __init__(self, slack_bus: int = 1, capacity_alpha: float = 1.5, min_capacity_mw: float = 1.0,
                 pi_exponent: int = 1, islanding_factor: float = 10.0) -> None:
        if capacity_alpha <= 0:
            raise ValueError("capacity alpha must be positive")
        if min_capacity_mw <= 0:
            raise ValueError("minimum capacity must be positive")
        if pi_exponent < 1:
            raise ValueError("PI exponent must be at least 1")
        if islanding_factor <= 0:
            raise ValueError("islanding factor must be positive")
        self.slack_bus = slack_bus
        self.capacity_alpha = capacity_alpha
        self.min_capacity_mw = min_capacity_mw
        self.pi_exponent = pi_exponent
        self.islanding_factor = islanding_factor


@dataclass(frozen=True)
class Grid:
    """
    A transmission grid.

    Attributes:
        buses: bus ids in matrix order.
        slack: the reference bus (angle 0).
        lines: lines in id order; line id `lid` is `lines[lid - 1]`.
        injections: net injection per bus in MW (generation minus load).
    """
    buses: Tuple[int, ...]
    slack: int
    lines: Tuple[Line, ...]
    injections: Dict[int, float]

    @property
    def line_ids(self) -> range:
        return range(1, len(self.lines) + 1)

    def line(self, lid: int) -> Line:
        return self.lines[lid - 1]

    def index(self, bus: int) -> int:
        return self.buses.index(bus)

    def graph(self) -> nx.MultiGraph:
        g = nx.MultiGraph()
        g.add_nodes_from(self.buses)
        for lid in self.line_ids:
            line = self.line(lid)
            g.add_edge(line.from_bus, line.to_bus, key=lid, reactance=line.reactance)
        return g

    def is_connected(self) -> bool:
        return nx.is_connected(self.graph())

    def islanding_lines(self) -> frozenset:
        """Ids of lines whose outage splits the grid."""
        g = self.graph()
        out = set()
        for lid in self.line_ids:
            line = self.line(lid)
            g.remove_edge(line.from_bus, line.to_bus, key=lid)
            if not nx.is_connected(g):
                out.add(lid)
            g.add_edge(line.from_bus, line.to_bus, key=lid, reactance=line.reactance)
        return frozenset(out)

    def without_line(self, lid: int) -> "Grid":
        lines = self.lines[:lid - 1] + self.lines[lid:]
        return Grid(self.buses, self.slack, lines, dict(self.injections))

    def reordered(self, order: Iterable[int]) -> "Grid":
        """Copy whose line `i + 1` is this grid's line `order[i]`."""
        return Grid(self.buses, self.slack, tuple(self.line(lid) for lid in order), dict(self.injections))


def grid_from_scenario(spec: ScenarioSpec, options: Optional[GridOptions] = None) -> Grid:
    options = options or GridOptions()
    if options.slack_bus not in spec.buses:
        raise GridError(f"slack bus {options.slack_bus} is not a bus of the scenario")
    injections = {bus: 0.0 for bus in spec.buses}
    for bus, mw in spec.gens:
        injections[bus] += mw
    for bus, mw in spec.loads:
        injections[bus] -= mw
    grid = Grid(tuple(spec.buses), options.slack_bus, tuple(spec.lines), injections)
    logger.debug(f"grid: {len(grid.buses)} buses, {len(grid.lines)} lines, slack {grid.slack}")
    return grid
