import random
from typing import List, Optional, Tuple

from ingest.scenario import Line, ScenarioSpec, Segment, UavSpec, validate_scenario

RATIOS = (None, 0.9, 1.0, 1.1, 1.2)


class ScenarioGenerator:
    """Seeded source of tiny, valid scenarios for oracle cross-checks."""

    def __init__(self, seed: Optional[int]) -> None:
        self.seed = seed
        self.rng = random.Random(seed)

    def _grid(self, max_points: int) -> Tuple[int, List[Line], List[Tuple[int, ...]]]:
        n_buses = self.rng.choice((2, 3))
        pairs = [(1, 2)] if n_buses == 2 else [(1, 2), (2, 3)]
        if n_buses == 3 and self.rng.random() < 0.5:
            pairs.append((1, 3))
        lines = [Line(a, b, self.rng.choice((0.1, 0.2, 0.3))) for a, b in pairs]

        next_point = n_buses + 1
        line_points = []
        for a, b in pairs:
            room = max_points - next_point + 1
            interior = self.rng.randint(0, max(0, min(2, room)))
            pts = [a] + list(range(next_point, next_point + interior)) + [b]
            next_point += interior
            line_points.append(tuple(pts))
        return n_buses, lines, line_points

    def _uav(self, n_points: int) -> UavSpec:
        ffuel = self.rng.randint(1, 3)
        hfuel = self.rng.randint(1, 2)
        # hop distance to the base never exceeds n_points - 1
        reserve = ffuel * (n_points - 1)
        cap = 2 * reserve + self.rng.randint(2, 12)
        init = self.rng.randint(reserve + 1, cap)
        return UavSpec(self.rng.randint(1, n_points), init, cap, ffuel, hfuel)

    def generate(self, max_points: int = 6, max_uavs: int = 2, max_horizon: int = 8) -> ScenarioSpec:
        """Draw one scenario with at most `max_points` points, `max_uavs` UAVs and horizon `max_horizon`."""
        n_buses, lines, line_points = self._grid(max_points)
        n_points = max(max(pts) for pts in line_points)
        segments = [Segment(a, b, self.rng.choice(RATIOS))
                    for pts in line_points for a, b in zip(pts, pts[1:])]

        loads = [(bus, float(self.rng.randint(10, 90))) for bus in range(2, n_buses + 1)]
        gens = [(1, sum(mw for _, mw in loads))]

        horizon = self.rng.randint(3, max_horizon)
        uavs = [self._uav(n_points) for _ in range(self.rng.randint(1, max_uavs))]
        k = self.rng.randint(0, len(uavs) - 1)
        cs = self.rng.choice((0, 30, 50, 80, 100))
        rcs = self.rng.choice((0, cs // 2, cs))

        spec = ScenarioSpec(
            n_buses=n_buses, n_lines=len(lines), n_points=n_points, n_segments=len(segments),
            segment_len=1, n_uavs=len(uavs), horizon_S=horizon,
            loads=tuple(loads), gens=tuple(gens), lines=tuple(lines),
            pi_distance_D=self.rng.choice((0.0, 1.0, 5.0, 1000.0)),
            line_points=tuple(line_points), segments=tuple(segments), uavs=tuple(uavs),
            tc=self.rng.randint(1, horizon), k_resilience=k, tr=self.rng.randint(1, horizon),
            cs_pct=cs, rcs_pct=rcs, base_point=self.rng.randint(1, n_points),
            cyclic=self.rng.random() < 0.2,
        )
        validate_scenario(spec)
        return spec
