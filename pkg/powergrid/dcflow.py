"""
Base-case DC power flow.

The susceptance matrix uses the positive-diagonal convention (diagonal = sum of 1/z
over incident lines). The sensitivity matrix X is the inverse of the susceptance
matrix with the slack row and column removed, embedded back with zeros.
"""
import logging
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np

from powergrid.grid import BASE_MVA, Grid, SingularMatrix, Unbalanced

logger = logging.getLogger(__name__)

BALANCE_TOLERANCE = 1e-6


@dataclass(frozen=True)
class FlowState:
    """
    Attributes:
        flows: MW per line id, positive from `from_bus` to `to_bus`.
        angles: bus voltage angle in radians, slack at 0.
    """
    flows: Dict[int, float]
    angles: Dict[int, float]

    def balance_residual(self, grid: Grid) -> float:
        """Largest mismatch between a bus injection and the net flow leaving it."""
        leaving = {bus: 0.0 for bus in grid.buses}
        for lid, flow in self.flows.items():
            line = grid.line(lid)
            leaving[line.from_bus] += flow
            leaving[line.to_bus] -= flow
        return max(abs(leaving[bus] - grid.injections[bus]) for bus in grid.buses)


def build_susceptance(grid: Grid) -> np.ndarray:
    n = len(grid.buses)
    b = np.zeros((n, n))
    for line in grid.lines:
        i, j = grid.index(line.from_bus), grid.index(line.to_bus)
        y = 1.0 / line.reactance
        b[i, i] += y
        b[j, j] += y
        b[i, j] -= y
        b[j, i] -= y
    return b


def _non_slack(grid: Grid) -> Tuple[int, list]:
    s = grid.index(grid.slack)
    return s, [i for i in range(len(grid.buses)) if i != s]


def sensitivity_matrix(grid: Grid, susceptance: Optional[np.ndarray] = None) -> np.ndarray:
    """
    Invert the slack-reduced susceptance matrix.

    Raises:
        SingularMatrix: the grid is disconnected.
    """
    if not grid.is_connected():
        raise SingularMatrix("grid is disconnected; the reduced susceptance matrix is singular")
    b = build_susceptance(grid) if susceptance is None else susceptance
    _, keep = _non_slack(grid)
    x = np.zeros_like(b)
    if not keep:
        return x
    try:
        x[np.ix_(keep, keep)] = np.linalg.inv(b[np.ix_(keep, keep)])
    except np.linalg.LinAlgError as exc:
        raise SingularMatrix(f"reduced susceptance matrix is singular: {exc}") from None
    return x


def dc_power_flow(grid: Grid, sensitivity: Optional[np.ndarray] = None) -> FlowState:
    """
    Solve the DC power flow of a balanced, connected grid.

    Raises:
        Unbalanced: generation and load differ by more than 1e-6 MW.
        SingularMatrix: the grid is disconnected.
    """
    total = sum(grid.injections.values())
    if abs(total) > BALANCE_TOLERANCE:
        raise Unbalanced(f"net injection is {total:.6f} MW; generation must equal load")
    x = sensitivity_matrix(grid) if sensitivity is None else sensitivity
    p = np.array([grid.injections[bus] for bus in grid.buses]) / BASE_MVA
    theta = x @ p
    flows = {}
    for lid in grid.line_ids:
        line = grid.line(lid)
        i, j = grid.index(line.from_bus), grid.index(line.to_bus)
        flows[lid] = float(BASE_MVA * (theta[i] - theta[j]) / line.reactance)
    angles = {bus: float(theta[grid.index(bus)]) for bus in grid.buses}
    logger.debug(f"DC flow solved, largest |flow| {max((abs(f) for f in flows.values()), default=0.0):.3f} MW")
    return FlowState(flows, angles)
