"""
Plan text format.

    # format: grid-sentinel/1 plan
    # horizon 91
    # fuel_scale 100
    # cyclic 0
    # waive_tail_windows 1
    # claimed_surveilled 3 7 12
    uav,step,event,point,fuel
    1,1,VISIT,10,120000
    1,2,DEPART,4,119700
    1,3,AT_BASE,,

Lines starting with '# summary' carry the coverage report and are ignored on reading.
"""
import csv
import io
from typing import Dict, FrozenSet, List, Optional, TextIO

from plan.coverage import CoverageReport
from plan.plan import Event, EventKind, MalformedPlan, Plan

FORMAT_TAG = "grid-sentinel/1 plan"
COLUMNS = ["uav", "step", "event", "point", "fuel"]


def _ids(values) -> str:
    return " ".join(str(v) for v in sorted(values))


def write_plan(plan: Plan, handle: TextIO, report: Optional[CoverageReport] = None) -> None:
    handle.write(f"# format: {FORMAT_TAG}\n")
    handle.write(f"# horizon {plan.horizon}\n")
    handle.write(f"# fuel_scale {plan.fuel_scale}\n")
    handle.write(f"# cyclic {int(plan.cyclic)}\n")
    handle.write(f"# waive_tail_windows {int(plan.waive_tail_windows)}\n")
    if plan.claimed_surveilled is not None:
        handle.write(f"# claimed_surveilled {_ids(plan.claimed_surveilled)}".rstrip() + "\n")
    if plan.claimed_resilient is not None:
        handle.write(f"# claimed_resilient {_ids(plan.claimed_resilient)}".rstrip() + "\n")
    writer = csv.writer(handle, lineterminator="\n")
    writer.writerow(COLUMNS)
    for u in plan.uavs:
        for ev in plan.timelines[u]:
            writer.writerow([u, ev.step, ev.kind.value,
                             "" if ev.point is None else ev.point,
                             "" if ev.fuel is None else ev.fuel])
    if report is not None:
        handle.write(f"# summary cs {report.cs_achieved:.2f}\n")
        handle.write(f"# summary rcs {report.rcs_achieved:.2f}\n")
        handle.write(f"# summary surveilled {_ids(report.surveilled_points)}".rstrip() + "\n")
        handle.write(f"# summary resilient {_ids(report.resilient_points)}".rstrip() + "\n")


def plan_to_text(plan: Plan, report: Optional[CoverageReport] = None) -> str:
    buffer = io.StringIO()
    write_plan(plan, buffer, report)
    return buffer.getvalue()


def _int(token: str, number: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise MalformedPlan(f"line {number}: expected an integer, got '{token}'") from None


def read_plan(handle: TextIO) -> Plan:
    """
    Raises:
        MalformedPlan: unknown event kinds, bad numbers, missing header fields or a bad event layout.
    """
    meta: Dict[str, str] = {}
    rows: List[tuple] = []
    header_seen = False
    for number, raw in enumerate(handle, start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            parts = line[1:].strip().split(None, 1)
            if parts and parts[0] not in ("summary", "format:"):
                meta[parts[0]] = parts[1] if len(parts) > 1 else ""
            continue
        if not header_seen:
            if [c.strip() for c in line.split(",")] != COLUMNS:
                raise MalformedPlan(f"line {number}: expected header '{','.join(COLUMNS)}'")
            header_seen = True
            continue
        fields = next(csv.reader([line]))
        if len(fields) != len(COLUMNS):
            raise MalformedPlan(f"line {number}: expected {len(COLUMNS)} columns, got {len(fields)}")
        rows.append((number, fields))

    for key in ("horizon", "fuel_scale", "cyclic", "waive_tail_windows"):
        if key not in meta:
            raise MalformedPlan(f"missing '# {key}' line")

    def id_set(key: str) -> Optional[FrozenSet[int]]:
        if key not in meta:
            return None
        return frozenset(_int(t, 0) for t in meta[key].split())

    timelines: Dict[int, List[Event]] = {}
    for number, (u, step, kind, point, fuel) in rows:
        try:
            event_kind = EventKind(kind.strip())
        except ValueError:
            raise MalformedPlan(f"line {number}: unknown event '{kind}'") from None
        event = Event(_int(step, number), event_kind,
                      _int(point, number) if point.strip() else None,
                      _int(fuel, number) if fuel.strip() else None)
        timelines.setdefault(_int(u, number), []).append(event)

    plan = Plan(
        horizon=_int(meta["horizon"], 0),
        timelines={u: tuple(sorted(events, key=lambda e: e.step)) for u, events in timelines.items()},
        fuel_scale=_int(meta["fuel_scale"], 0),
        cyclic=meta["cyclic"].strip() == "1",
        waive_tail_windows=meta["waive_tail_windows"].strip() == "1",
        claimed_surveilled=id_set("claimed_surveilled"),
        claimed_resilient=id_set("claimed_resilient"),
    )
    plan.check_shape()
    return plan


def plan_from_text(text: str) -> Plan:
    return read_plan(io.StringIO(text))
