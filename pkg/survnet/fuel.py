"""
Fixed-point fuel arithmetic.

Fuel is tracked in units of 1/scale (centifuel for scale 100). Flying a segment costs
floor(ffuel * ratio * scale + 1/2); every other quantity is an exact multiple of scale.
Transit to and from the base is level flight.
"""
from sympy import Rational, floor

from ingest.scenario import UavSpec


def fly_cost(uav: UavSpec, ratio: Rational, scale: int) -> int:
    return int(floor(uav.ffuel * Rational(ratio) * scale + Rational(1, 2)))


def hover_cost(uav: UavSpec, scale: int) -> int:
    return uav.hfuel * scale


def reserve(uav: UavSpec, tb: int, scale: int) -> int:
    """Fuel needed to reach the base from a point `tb` hops away."""
    return uav.ffuel * tb * scale


def refuel_level(uav: UavSpec, tb: int, scale: int) -> int:
    """Fuel on arrival at a point `tb` hops from the base after filling up."""
    return (uav.fuel_cap - uav.ffuel * tb) * scale


def initial_fuel(uav: UavSpec, scale: int) -> int:
    return uav.init_fuel * scale
