import os
import unittest

from cli.pipeline import prepare
from cli.svg import polyline_chart
from cli.sweep import AllUnsat, Runner, SweepSpec, apply_fixed, apply_value, min_uavs, run_sweep
from ingest.parser import load_scenario
from ingest.scenario import Segment, UavSpec

DATA_DIR = os.path.join(os.path.dirname(__file__), "..", "data")
PATH3 = os.path.join(DATA_DIR, "toy_path3.txt")


def path_scenario(n_points, starts=(1,)):
    """One line from bus 1 to bus 2 carrying `n_points` points; tc=1 lets a UAV keep only one of them fresh."""
    pts = (1,) + tuple(range(3, n_points + 1)) + (2,)
    segments = tuple(Segment(a, b) for a, b in zip(pts, pts[1:]))
    return load_scenario(PATH3).replace(
        n_points=n_points, n_segments=len(segments), line_points=(pts,), segments=segments,
        n_uavs=len(starts), uavs=tuple(UavSpec(p, 100, 100, 2, 1) for p in starts))


class TestSweepSpec(unittest.TestCase):

    def test_checks(self):
        with self.assertRaises(ValueError):
            SweepSpec("weather", (1,))
        with self.assertRaises(ValueError):
            SweepSpec("tc", ())
        with self.assertRaises(ValueError):
            SweepSpec("tc", (3, 2))
        with self.assertRaises(ValueError):
            SweepSpec("tc", (3,), {"weather": 1})


class TestApplyValue(unittest.TestCase):

    def setUp(self):
        self.prepared = prepare(load_scenario(os.path.join(DATA_DIR, "ieee14.txt")))

    def test_horizon_clips_thresholds(self):
        spec = apply_value(self.prepared, "horizon_S", 30).spec
        self.assertEqual((spec.horizon_S, spec.tc, spec.tr), (30, 25, 30))

    def test_coverage_keeps_order(self):
        spec = apply_value(self.prepared, "cs_pct", 40).spec
        self.assertEqual((spec.cs_pct, spec.rcs_pct), (40, 40))

    def test_fleet_prefix(self):
        spec = apply_value(self.prepared, "n_uavs", 2).spec
        self.assertEqual(spec.uavs, self.prepared.spec.uavs[:2])

    def test_fixed_aliases(self):
        spec = apply_fixed(self.prepared, {"cs": 60, "S": 30}).spec
        self.assertEqual((spec.cs_pct, spec.rcs_pct, spec.horizon_S, spec.tc, spec.tr), (60, 50, 30, 25, 30))

    def test_fixed_field_names(self):
        spec = apply_fixed(self.prepared, {"horizon_S": 40, "k_resilience": 1, "rcs_pct": 20}).spec
        self.assertEqual((spec.horizon_S, spec.k_resilience, spec.rcs_pct), (40, 1, 20))

    def test_top_lines(self):
        crit = apply_value(self.prepared, "top_lines", 0.3).crit
        self.assertEqual(len(crit.selected), 6)
        self.assertIn(14, crit.selected)


class TestRuns(unittest.TestCase):

    def test_single_value(self):
        prepared = prepare(load_scenario(os.path.join(DATA_DIR, "toy_bridge2.txt")))
        rows = run_sweep(prepared, SweepSpec("tc", (4,)), Runner("enumerative"))
        self.assertEqual(len(rows), 1)
        self.assertEqual(rows[0].status, "sat")
        self.assertGreaterEqual(rows[0].cs_achieved, 50.0)

    def test_all_unsat(self):
        prepared = prepare(load_scenario(os.path.join(DATA_DIR, "toy_path3.txt")))
        with self.assertRaises(AllUnsat):
            min_uavs(prepared, [0], Runner("enumerative"))

    def test_vacuous_coverage(self):
        prepared = prepare(load_scenario(os.path.join(DATA_DIR, "toy_path3.txt")))
        search = min_uavs(prepared, [0], Runner("enumerative"), cs_pct=0)
        self.assertEqual(search.size, 1)
        self.assertEqual(search.undecided, ())


class TestTrends(unittest.TestCase):

    def fleet_size(self, prepared, cs_pct):
        try:
            return min_uavs(prepared, range(len(prepared.spec.uavs)), Runner("enumerative"), cs_pct=cs_pct).size
        except AllUnsat:
            return float("inf")

    def test_fleet_grows_with_coverage_target(self):
        prepared = prepare(path_scenario(3, starts=(1, 2)))
        sizes = [self.fleet_size(prepared, cs) for cs in (0, 30, 60, 100)]
        self.assertEqual(sizes, [1, 1, 2, float("inf")])
        self.assertEqual(sizes, sorted(sizes))

    def best_coverage(self, n_points):
        prepared = prepare(path_scenario(n_points))
        rows = run_sweep(prepared, SweepSpec("cs_pct", (10, 20, 25, 33, 50)), Runner("enumerative"))
        return max(row.value for row in rows if row.status == "sat")

    def test_coverage_falls_as_the_line_grows(self):
        best = [self.best_coverage(n) for n in (3, 4, 5)]
        self.assertEqual(best, [33, 25, 20])
        self.assertEqual(best, sorted(best, reverse=True))


class TestChart(unittest.TestCase):

    def test_points(self):
        svg = polyline_chart([(25, 1.5), (30, 1.0), (35, 0.5)], "time & tc", "tc", "seconds")
        self.assertTrue(svg.startswith("<svg"))
        self.assertEqual(svg.count("<circle"), 3)
        self.assertIn("time &amp; tc", svg)

    def test_empty(self):
        self.assertNotIn("<polyline", polyline_chart([], "empty", "x", "y"))


if __name__ == "__main__":
    unittest.main()
