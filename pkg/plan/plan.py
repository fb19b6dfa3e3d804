"""
Concrete surveillance plans.

A plan gives every UAV exactly one event per step 1..S:
- VISIT: at a point (hover or one-segment flight from the previous step).
- DEPART: at a point, leaving for the base after this step.
- TO_BASE: in transit towards the base.
- AT_BASE: at the base; the first AT_BASE of a trip is the refuel step, later ones park.
- FROM_BASE: in transit back towards `point`.
- RESUME: back at a point with a full tank minus the trip from the base.

VISIT, DEPART and RESUME carry the point and the fuel ledger value in fixed-point units.
"""
import enum
import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Tuple

from prettytable import PrettyTable

logger = logging.getLogger(__name__)


class MalformedPlan(ValueError):
    pass


class EventKind(enum.Enum):
    VISIT = "VISIT"
    DEPART = "DEPART"
    TO_BASE = "TO_BASE"
    AT_BASE = "AT_BASE"
    FROM_BASE = "FROM_BASE"
    RESUME = "RESUME"

    @property
    def at_point(self) -> bool:
        return self in (EventKind.VISIT, EventKind.DEPART, EventKind.RESUME)


@dataclass(frozen=True)
class Event:
    step: int
    kind: EventKind
    point: Optional[int] = None
    fuel: Optional[int] = None

    def __str__(self) -> str:
        where = "" if self.point is None else f" {self.point}"
        ledger = "" if self.fuel is None else f" [{self.fuel}]"
        return f"{self.kind.value}{where}{ledger}"


@dataclass(frozen=True)
class Plan:
    """
    Attributes:
        horizon: number of steps S.
        timelines: events of each UAV (1-based id), one per step in step order.
        fuel_scale: fixed-point units per fuel unit of the scenario.
        cyclic: whether the plan is meant to repeat.
        waive_tail_windows: resilience windows running past S need no witness.
        claimed_surveilled, claimed_resilient: point sets the producer of the plan asserts.
    """
    horizon: int
    timelines: Dict[int, Tuple[Event, ...]]
    fuel_scale: int = 100
    cyclic: bool = False
    waive_tail_windows: bool = True
    claimed_surveilled: Optional[FrozenSet[int]] = None
    claimed_resilient: Optional[FrozenSet[int]] = None

    @property
    def uavs(self) -> Tuple[int, ...]:
        return tuple(sorted(self.timelines))

    def event(self, u: int, s: int) -> Event:
        return self.timelines[u][s - 1]

    def check_shape(self) -> None:
        """Raise MalformedPlan unless every UAV has exactly one event per step, in order."""
        if self.horizon < 1:
            raise MalformedPlan(f"horizon must be positive, got {self.horizon}")
        if not self.timelines:
            raise MalformedPlan("plan has no UAVs")
        for u, events in self.timelines.items():
            if len(events) != self.horizon:
                raise MalformedPlan(f"UAV {u} has {len(events)} events for a horizon of {self.horizon}")
            for s, ev in enumerate(events, start=1):
                if ev.step != s:
                    raise MalformedPlan(f"UAV {u} event {s} is labelled step {ev.step}")
                if ev.kind.at_point and (ev.point is None or ev.fuel is None):
                    raise MalformedPlan(f"UAV {u} step {s}: {ev.kind.value} needs a point and a fuel value")
                if ev.kind == EventKind.FROM_BASE and ev.point is None:
                    raise MalformedPlan(f"UAV {u} step {s}: FROM_BASE needs its destination point")

    def visits(self) -> Dict[int, List[Tuple[int, int]]]:
        """Point -> ordered (step, uav) pairs for every step a UAV is at the point."""
        log: Dict[int, List[Tuple[int, int]]] = {}
        for u in self.uavs:
            for ev in self.timelines[u]:
                if ev.kind.at_point:
                    log.setdefault(ev.point, []).append((ev.step, u))
        for entries in log.values():
            entries.sort()
        return log

    def refuel_trips(self, u: int) -> int:
        return sum(1 for ev in self.timelines[u] if ev.kind == EventKind.DEPART)

    def display(self, first: int = 1, last: Optional[int] = None) -> None:
        last = self.horizon if last is None else min(last, self.horizon)
        table = PrettyTable()
        table.field_names = ["Step"] + [f"UAV {u}" for u in self.uavs]
        for s in range(first, last + 1):
            table.add_row([s] + [str(self.event(u, s)) for u in self.uavs])
        print(table)
