"""
Constraint model container, encoding options and variable naming.

Variable names are deterministic: `visit_<u>_<p>_<s>`, `fuel_<u>_<s>` and so on,
with 1-based UAV, point and step indices.
"""
import logging
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

from prettytable import PrettyTable

from encoder.terms import BOOL, INT, Term, Var

logger = logging.getLogger(__name__)


class EncodingError(ValueError):
    pass


class StrandedUav(EncodingError):
    pass


class EmptyFleet(EncodingError):
    pass


class HorizonTooShort(EncodingError):
    pass


class EncodeOptions:
    """
    Args:
        cyclic: force a repeatable plan; a scenario's own cyclic flag also turns it on.
        fixed_point_scale: fuel units per input fuel unit (100 = centifuel).
        waive_tail_windows: skip the (k+1)-UAV witness for windows running past the horizon.
        weight_resolution: integer weight of the most critical point in coverage sums.
    """

    def __init__(self, cyclic: bool = False, fixed_point_scale: int = 100, waive_tail_windows: bool = True,
                 weight_resolution: int = 10000) -> None:
        if fixed_point_scale < 1:
            raise ValueError("fixed point scale must be at least 1")
        if weight_resolution < 1:
            raise ValueError("weight resolution must be at least 1")
        self.cyclic = cyclic
        self.fixed_point_scale = fixed_point_scale
        self.waive_tail_windows = waive_tail_windows
        self.weight_resolution = weight_resolution

    def __repr__(self) -> str:
        return (f"EncodeOptions(cyclic={self.cyclic}, fixed_point_scale={self.fixed_point_scale}, "
                f"waive_tail_windows={self.waive_tail_windows}, weight_resolution={self.weight_resolution})")


def _b(*parts) -> Var:
    return Var("_".join(map(str, parts)), BOOL)


def visit(u: int, p: int, s: int) -> Var:
    return _b("visit", u, p, s)


def hover(u: int, p: int, s: int) -> Var:
    return _b("hover", u, p, s)


def fly(u: int, p: int, s: int) -> Var:
    return _b("fly", u, p, s)


def to_refuel(u: int, p: int, s: int) -> Var:
    return _b("to_refuel", u, p, s)


def refuel(u: int, s: int) -> Var:
    return _b("refuel", u, s)


def refuel_to(u: int, p: int, s: int) -> Var:
    return _b("refuel_to", u, p, s)


def away(u: int, s: int) -> Var:
    return _b("away", u, s)


def visited(p: int, s: int) -> Var:
    return _b("visited", p, s)


def surveilled(p: int) -> Var:
    return _b("surveilled", p)


def res_visited(p: int, s: int) -> Var:
    return _b("res_visited", p, s)


def res_surveilled(p: int) -> Var:
    return _b("res_surveilled", p)


def visit_during(u: int, p: int, s: int) -> Var:
    return _b("visit_during", u, p, s)


def fuel(u: int, s: int) -> Var:
    return Var(f"fuel_{u}_{s}", INT)


@dataclass(frozen=True)
class ConstraintModel:
    """
    Attributes:
        declarations: every variable, in emission order.
        assertions: (group, term) pairs; the group names the rule family.
        horizon, n_uavs, points: index ranges of the variable families.
        weights: integer coverage weight per point.
        cyclic: whether the model encodes a repeatable plan.
        options: the encoding options used.
    """
    declarations: Tuple[Var, ...]
    assertions: Tuple[Tuple[str, Term], ...]
    horizon: int
    n_uavs: int
    points: Tuple[int, ...]
    weights: Dict[int, int]
    cyclic: bool
    options: EncodeOptions

    @property
    def n_bools(self) -> int:
        return sum(1 for v in self.declarations if v.sort == BOOL)

    @property
    def n_ints(self) -> int:
        return sum(1 for v in self.declarations if v.sort == INT)

    def group_sizes(self) -> Dict[str, int]:
        sizes: Dict[str, int] = {}
        for group, _ in self.assertions:
            sizes[group] = sizes.get(group, 0) + 1
        return sizes

    def display(self, title: Optional[str] = None) -> None:
        table = PrettyTable()
        table.field_names = ["Rule", "Assertions"]
        for group, count in self.group_sizes().items():
            table.add_row([group, count])
        if title:
            print(title)
        print(table)
        print(f"{self.n_bools} boolean and {self.n_ints} integer variables, horizon {self.horizon}")
