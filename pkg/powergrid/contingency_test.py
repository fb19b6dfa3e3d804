import os
import unittest

from ingest.parser import load_scenario
from ingest.scenario import Line
from powergrid.contingency import (
    analyze_grid,
    default_capacities,
    lodf,
    lodf_matrix,
    performance_index,
)
from powergrid.dcflow import dc_power_flow, sensitivity_matrix
from powergrid.grid import Grid, GridOptions, IslandingOutage, SelfOutage, grid_from_scenario

DATA_DIR = os.path.join(os.path.dirname(__file__), "..", "data")


def case_grid():
    return grid_from_scenario(load_scenario(os.path.join(DATA_DIR, "ieee14.txt")))


def shifted(lid, removed):
    return lid if lid < removed else lid - 1


class TestLodf(unittest.TestCase):

    def test_parallel_twin_takes_everything(self):
        grid = Grid((1, 2), 1, (Line(1, 2, 1.0), Line(1, 2, 1.0)), {1: 50.0, 2: -50.0})
        x = sensitivity_matrix(grid)
        self.assertAlmostEqual(abs(lodf(grid, x, 1, 2)), 1.0)

    def test_self_outage(self):
        grid = Grid((1, 2), 1, (Line(1, 2, 1.0), Line(1, 2, 1.0)), {1: 0.0, 2: 0.0})
        with self.assertRaises(SelfOutage):
            lodf(grid, sensitivity_matrix(grid), 1, 1)

    def test_bridge(self):
        grid = Grid((1, 2, 3), 1, (Line(1, 2, 0.5), Line(2, 3, 0.5)), {1: 0.0, 2: 0.0, 3: 0.0})
        factors = lodf_matrix(grid)
        self.assertEqual(factors.islanding, frozenset({1, 2}))
        with self.assertRaises(IslandingOutage):
            factors.factor(1, 2)

    def test_matches_outage_resolve(self):
        grid = case_grid()
        base = dc_power_flow(grid)
        factors = lodf_matrix(grid)
        self.assertEqual(factors.islanding, frozenset({14}))
        for outaged in grid.line_ids:
            if outaged in factors.islanding:
                continue
            resolved = dc_power_flow(grid.without_line(outaged)).flows
            predicted = factors.post_outage_flows(base, outaged)
            for lid, flow in predicted.items():
                actual = resolved[shifted(lid, outaged)]
                self.assertLessEqual(abs(flow - actual), 1e-6 * max(1.0, abs(actual)),
                                     f"monitored {lid}, outaged {outaged}")


class TestPerformanceIndex(unittest.TestCase):

    def setUp(self):
        self.grid = Grid((1, 2, 3), 1, (Line(1, 2, 0.1), Line(2, 3, 0.1), Line(1, 3, 0.1)),
                         {1: 90.0, 2: 0.0, 3: -90.0})
        self.factors = lodf_matrix(self.grid)

    def test_flows_at_capacity(self):
        # losing line 3 pushes all 90 MW around the other two lines
        scores = performance_index(self.grid, self.factors, {1: 90.0, 2: 90.0, 3: 60.0})
        self.assertAlmostEqual(scores.pi[3], 2.0)

    def test_higher_exponent_lowers_index(self):
        caps = {1: 200.0, 2: 200.0, 3: 200.0}
        low = performance_index(self.grid, self.factors, caps, n=1)
        high = performance_index(self.grid, self.factors, caps, n=2)
        for lid in self.grid.line_ids:
            self.assertLess(high.pi[lid], low.pi[lid])

    def test_islanding_sentinel(self):
        spec = load_scenario(os.path.join(DATA_DIR, "toy_bridge2.txt"))
        _, factors, scores = analyze_grid(grid_from_scenario(spec))
        self.assertEqual(factors.islanding, frozenset({1}))
        self.assertEqual(scores.pi, {1: 10.0})
        self.assertTrue(scores.capacity_defaulted)

    def test_brute_force(self):
        grid = case_grid()
        base, factors, scores = analyze_grid(grid)
        finite = []
        for outaged in grid.line_ids:
            if outaged in factors.islanding:
                continue
            resolved = dc_power_flow(grid.without_line(outaged)).flows
            expected = sum((resolved[shifted(lid, outaged)] / scores.capacities[lid]) ** 2
                           for lid in grid.line_ids if lid != outaged)
            self.assertAlmostEqual(scores.pi[outaged], expected, delta=1e-9 * max(1.0, expected))
            finite.append(expected)
        self.assertAlmostEqual(scores.pi[14], 10.0 * max(finite), delta=1e-9 * max(finite) * 10)
        self.assertEqual(len(scores.pi), 20)

    def test_reorder_invariance(self):
        grid = case_grid()
        _, _, scores = analyze_grid(grid)
        order = list(reversed(grid.line_ids))
        _, _, again = analyze_grid(grid.reordered(order))
        for new_id, old_id in enumerate(order, start=1):
            self.assertAlmostEqual(again.pi[new_id], scores.pi[old_id], delta=1e-9 * max(1.0, scores.pi[old_id]))

    def test_default_capacity_floor(self):
        grid = Grid((1, 2, 3), 1, (Line(1, 2, 0.1), Line(2, 3, 0.1), Line(1, 3, 0.1)),
                    {1: 0.0, 2: 0.0, 3: 0.0})
        caps = default_capacities(dc_power_flow(grid), GridOptions(min_capacity_mw=2.5))
        self.assertEqual(caps, {1: 2.5, 2: 2.5, 3: 2.5})


if __name__ == "__main__":
    unittest.main()
