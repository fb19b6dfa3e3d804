"""
Single-line outage analysis.

Classes:
- LodfMatrix: outage distribution factors for every (monitored, outaged) line pair.
- PiScores: performance index per outaged line.

Functions:
- lodf(grid, X, l1, l2): factor of monitored line l1 for the outage of l2.
- lodf_matrix(grid, X): all factors, with islanding outages set aside.
- default_capacities(base, options): alpha-scaled base flows, floored.
- performance_index(grid, lodf, capacities, n, base, islanding_factor): PI per outage.
- analyze_grid(grid, options, capacities): the whole chain from one call.

Post-outage flow of l1 for the loss of l2 is P_l1 + L(l1, l2) * P_l2.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Optional, Tuple

import numpy as np
from prettytable import PrettyTable

from powergrid.dcflow import FlowState, dc_power_flow, sensitivity_matrix
from powergrid.grid import Grid, GridOptions, IslandingOutage, SelfOutage

logger = logging.getLogger(__name__)


def lodf(grid: Grid, x: np.ndarray, l1: int, l2: int, islanding: Optional[FrozenSet[int]] = None) -> float:
    """
    Line outage distribution factor of monitored line `l1` for the outage of `l2`.

    Args:
        grid: the pre-outage grid.
        x: its sensitivity matrix.
        l1, l2: line ids.
        islanding: precomputed islanding line ids, computed when omitted.

    Raises:
        SelfOutage: l1 == l2.
        IslandingOutage: removing l2 disconnects the grid.
    """
    if l1 == l2:
        raise SelfOutage(f"line {l1} cannot monitor its own outage")
    islanding = grid.islanding_lines() if islanding is None else islanding
    if l2 in islanding:
        raise IslandingOutage(f"outage of line {l2} islands the grid")
    mon, out = grid.line(l1), grid.line(l2)
    i, j = grid.index(mon.from_bus), grid.index(mon.to_bus)
    k, m = grid.index(out.from_bus), grid.index(out.to_bus)
    numerator = x[i, k] - x[j, k] - x[i, m] + x[j, m]
    denominator = out.reactance - (x[k, k] + x[m, m] - 2 * x[k, m])
    return float(out.reactance / mon.reactance * numerator / denominator)


@dataclass(frozen=True)
class LodfMatrix:
    entries: Dict[Tuple[int, int], float]
    islanding: FrozenSet[int]

    def factor(self, monitored: int, outaged: int) -> float:
        if monitored == outaged:
            raise SelfOutage(f"line {monitored} cannot monitor its own outage")
        if outaged in self.islanding:
            raise IslandingOutage(f"outage of line {outaged} islands the grid")
        return self.entries[(monitored, outaged)]

    def post_outage_flows(self, base: FlowState, outaged: int) -> Dict[int, float]:
        """Flows on every surviving line after `outaged` trips."""
        p_out = base.flows[outaged]
        return {lid: flow + self.factor(lid, outaged) * p_out
                for lid, flow in base.flows.items() if lid != outaged}


def lodf_matrix(grid: Grid, x: Optional[np.ndarray] = None) -> LodfMatrix:
    x = sensitivity_matrix(grid) if x is None else x
    islanding = grid.islanding_lines()
    entries = {}
    for l2 in grid.line_ids:
        if l2 in islanding:
            continue
        for l1 in grid.line_ids:
            if l1 != l2:
                entries[(l1, l2)] = lodf(grid, x, l1, l2, islanding)
    if islanding:
        logger.info(f"islanding outages: {sorted(islanding)}")
    return LodfMatrix(entries, islanding)


@dataclass(frozen=True)
class PiScores:
    """
    Attributes:
        pi: performance index per outaged line id.
        exponent_n: the PI exponent n; each term is raised to 2n.
        islanding: outages scored with the sentinel instead of a flow sum.
        capacities: the line capacities (MW) the index was computed against.
        capacity_defaulted: True when capacities came from the alpha rule.
    """
    pi: Dict[int, float]
    exponent_n: int
    islanding: FrozenSet[int] = frozenset()
    capacities: Dict[int, float] = field(default_factory=dict)
    capacity_defaulted: bool = False

    def ranked(self) -> Tuple[int, ...]:
        """Line ids from most to least critical, ties by id."""
        return tuple(sorted(self.pi, key=lambda lid: (-self.pi[lid], lid)))

    def display(self) -> None:
        table = PrettyTable()
        table.field_names = ["Line", "PI", "Capacity (MW)", "Islanding"]
        for lid in sorted(self.pi):
            table.add_row([lid, f"{self.pi[lid]:.6f}", f"{self.capacities.get(lid, float('nan')):.3f}",
                           "yes" if lid in self.islanding else ""])
        print(table)
        if self.capacity_defaulted:
            print("capacities defaulted from base-case flows (alpha rule)")


def default_capacities(base: FlowState, options: Optional[GridOptions] = None) -> Dict[int, float]:
    options = options or GridOptions()
    return {lid: max(options.capacity_alpha * abs(flow), options.min_capacity_mw)
            for lid, flow in base.flows.items()}


def performance_index(grid: Grid, factors: LodfMatrix, capacities: Dict[int, float], n: int = 1,
                      base: Optional[FlowState] = None, islanding_factor: float = 10.0) -> PiScores:
    """
    PI(l^) = sum over surviving lines l of (post-outage flow / capacity) ** (2n).

    Islanding outages score `islanding_factor` times the largest finite PI.
    """
    if n < 1:
        raise ValueError("PI exponent must be at least 1")
    if any(capacities[lid] <= 0 for lid in grid.line_ids):
        raise ValueError("line capacities must be positive")
    base = dc_power_flow(grid) if base is None else base
    pi: Dict[int, float] = {}
    for outaged in grid.line_ids:
        if outaged in factors.islanding:
            continue
        post = factors.post_outage_flows(base, outaged)
        pi[outaged] = float(sum((flow / capacities[lid]) ** (2 * n) for lid, flow in post.items()))
    sentinel = islanding_factor * (max(pi.values()) if pi else 1.0)
    for outaged in factors.islanding:
        pi[outaged] = sentinel
    return PiScores(pi, n, factors.islanding, dict(capacities))


def analyze_grid(grid: Grid, options: Optional[GridOptions] = None,
                 capacities: Optional[Tuple[float, ...]] = None) -> Tuple[FlowState, LodfMatrix, PiScores]:
    """Base flow, LODF matrix and PI scores; `capacities` (per line, in id order) overrides the default."""
    options = options or GridOptions()
    x = sensitivity_matrix(grid)
    base = dc_power_flow(grid, x)
    factors = lodf_matrix(grid, x)
    if capacities is None:
        caps = default_capacities(base, options)
    else:
        caps = {lid: capacities[lid - 1] for lid in grid.line_ids}
    scores = performance_index(grid, factors, caps, options.pi_exponent, base, options.islanding_factor)
    if capacities is None:
        scores = PiScores(scores.pi, scores.exponent_n, scores.islanding, scores.capacities, True)
    logger.info(f"contingency analysis: {len(grid.line_ids)} outages, {len(factors.islanding)} islanding")
    return base, factors, scores
