"""
CSV output of the grid analysis: base flows, LODF factors, PI scores and point weights.

Every file opens with a `# format: grid-sentinel/1 <kind>` line; rows are in id order
so reruns on the same scenario produce identical bytes.
"""
import csv
import logging
import os
from typing import List

from cli.pipeline import Prepared
from criticality.ranking import integer_weights

logger = logging.getLogger(__name__)

FORMAT = "grid-sentinel/1"


def _number(value: float) -> str:
    return format(value, ".12g")


def _open(out_dir: str, name: str, kind: str, columns: List[str]):
    path = os.path.join(out_dir, name)
    handle = open(path, "w", newline="")
    handle.write(f"# format: {FORMAT} {kind}\n")
    writer = csv.writer(handle, lineterminator="\n")
    writer.writerow(columns)
    return path, handle, writer


def write_analysis(prepared: Prepared, out_dir: str, weight_resolution: int = 10000) -> List[str]:
    """Write flows.csv, lodf.csv, pi.csv and weights.csv into `out_dir`; return their paths."""
    os.makedirs(out_dir, exist_ok=True)
    grid, base, factors, scores, crit = prepared.grid, prepared.base, prepared.factors, prepared.scores, prepared.crit
    paths = []

    path, handle, writer = _open(out_dir, "flows.csv", "flows",
                                 ["line", "from_bus", "to_bus", "reactance", "flow_mw", "capacity_mw"])
    with handle:
        for lid in grid.line_ids:
            line = grid.line(lid)
            writer.writerow([lid, line.from_bus, line.to_bus, _number(line.reactance),
                             _number(base.flows[lid]), _number(scores.capacities[lid])])
    paths.append(path)

    path, handle, writer = _open(out_dir, "lodf.csv", "lodf", ["monitored", "outaged", "factor"])
    with handle:
        for outaged in grid.line_ids:
            for monitored in grid.line_ids:
                if monitored == outaged:
                    continue
                if outaged in factors.islanding:
                    writer.writerow([monitored, outaged, "islanding"])
                else:
                    writer.writerow([monitored, outaged, _number(factors.factor(monitored, outaged))])
    paths.append(path)

    path, handle, writer = _open(out_dir, "pi.csv", "pi", ["line", "pi", "islanding", "weight", "level"])
    with handle:
        for lid in grid.line_ids:
            writer.writerow([lid, _number(scores.pi[lid]), int(lid in scores.islanding),
                             _number(crit.line_weight[lid]), crit.line_level[lid]])
    paths.append(path)

    weights = integer_weights(crit, weight_resolution)
    path, handle, writer = _open(out_dir, "weights.csv", "weights", ["point", "weight", "level", "integer_weight"])
    with handle:
        for p in prepared.spec.points:
            writer.writerow([p, _number(crit.point_weight[p]), crit.point_level[p], weights[p]])
    paths.append(path)

    logger.info(f"wrote {len(paths)} analysis files to {out_dir}")
    return paths
