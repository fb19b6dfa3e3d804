import os
import unittest

from criticality.kmeans import kmeans
from criticality.ranking import (
    CriticalityError,
    OrphanPoint,
    integer_weights,
    point_weights,
    rank_criticality,
    restrict_to_lines,
    top_lines,
)
from ingest.parser import load_scenario
from powergrid.contingency import PiScores, analyze_grid
from powergrid.grid import grid_from_scenario

CASE_STUDY = os.path.join(os.path.dirname(__file__), "..", "data", "ieee14.txt")


def scores(values):
    return PiScores({lid: v for lid, v in enumerate(values, start=1)}, 1)


def equal_range_buckets(values, K):
    low, high = min(values), max(values)
    width = (high - low) / K
    return [min(int((v - low) / width), K - 1) if width else 0 for v in values]


class TestRankCriticality(unittest.TestCase):

    def test_wide_distance_single_level(self):
        crit = rank_criticality(scores([1.0, 4.0, 9.0]), 8.0)
        self.assertEqual(crit.K, 1)
        self.assertEqual(len(set(crit.line_weight.values())), 1)

    def test_zero_distance_distinct_levels(self):
        crit = rank_criticality(scores([3.0, 1.0, 2.0, 3.0]), 0.0)
        self.assertEqual(crit.K, 3)
        self.assertEqual(crit.line_level, {1: 3, 2: 1, 3: 2, 4: 3})

    def test_minimal_and_bounded(self):
        data = [0.5, 1.0, 7.0, 7.5, 20.0, 21.0, 40.0]
        for D in (0.0, 0.3, 1.0, 5.0, 10.0, 25.0):
            crit = rank_criticality(scores(data), D)
            worst = max(abs(data[lid - 1] - crit.line_weight[lid]) for lid in crit.line_weight)
            self.assertLessEqual(worst, D + 1e-9)
            if crit.K > 1:
                self.assertGreater(kmeans(data, crit.K - 1).max_distance, D)

    def test_monotone_in_distance(self):
        data = [2.0, 2.2, 5.0, 9.0, 9.5, 30.0]
        ks = [rank_criticality(scores(data), D).K for D in (0.0, 0.5, 2.0, 5.0, 20.0, 100.0)]
        self.assertEqual(ks, sorted(ks, reverse=True))

    def test_levels_follow_weights(self):
        crit = rank_criticality(scores([1.0, 50.0, 2.0, 49.0, 100.0]), 1.0)
        for a in crit.line_weight:
            for b in crit.line_weight:
                self.assertEqual(crit.line_level[a] < crit.line_level[b],
                                 crit.line_weight[a] < crit.line_weight[b])

    def test_agrees_with_equal_ranges_on_separated_data(self):
        data = [1.0, 2.0, 3.0, 50.0, 51.0, 100.0, 101.0]
        crit = rank_criticality(scores(data), 1.0)
        self.assertEqual(crit.K, 3)
        buckets = equal_range_buckets(data, 3)
        self.assertEqual([crit.line_level[lid] - 1 for lid in range(1, 8)], buckets)

    def test_case_study_levels(self):
        spec = load_scenario(CASE_STUDY)
        _, _, pis = analyze_grid(grid_from_scenario(spec))
        crit = rank_criticality(pis, spec.pi_distance_D)
        # three levels are expected for the published capacities, which are unknown
        self.assertGreaterEqual(crit.K, 1)
        self.assertEqual(len(crit.line_level), 20)
        self.assertEqual(crit.line_level[14], crit.K)


class TestPointWeights(unittest.TestCase):

    def setUp(self):
        # lines 1..3 of weights 2, 3, 1 meet at point 1
        self.crit = rank_criticality(scores([2.0, 3.0, 1.0]), 0.0)
        self.line_points = {1: (1, 4, 2), 2: (1, 5, 3), 3: (2, 1)}

    def test_interior_and_junction(self):
        crit = point_weights(self.crit, self.line_points, range(1, 6))
        self.assertEqual(crit.point_weight[4], 2.0)
        self.assertEqual(crit.point_weight[5], 3.0)
        self.assertEqual(crit.point_weight[1], 3.0)
        self.assertEqual(crit.point_weight[2], 2.0)
        self.assertEqual(crit.point_level[1], 3)

    def test_orphan(self):
        with self.assertRaises(OrphanPoint):
            point_weights(self.crit, self.line_points, range(1, 7))

    def test_restrict(self):
        crit = point_weights(self.crit, self.line_points, range(1, 6))
        self.assertEqual(top_lines(crit, 0.3), (2,))
        only = restrict_to_lines(crit, top_lines(crit, 0.3))
        self.assertEqual(only.point_weight, {1: 3.0, 2: 0.0, 3: 3.0, 4: 0.0, 5: 3.0})
        self.assertEqual(only.point_level[4], 0)
        with self.assertRaises(CriticalityError):
            restrict_to_lines(crit, [9])

    def test_integer_weights(self):
        crit = point_weights(self.crit, self.line_points, range(1, 6))
        self.assertEqual(integer_weights(crit, 300), {1: 300, 2: 200, 3: 300, 4: 200, 5: 300})

    def test_integer_weights_scale_free(self):
        doubled = rank_criticality(scores([4.0, 6.0, 2.0]), 0.0)
        a = integer_weights(point_weights(self.crit, self.line_points, range(1, 6)))
        b = integer_weights(point_weights(doubled, self.line_points, range(1, 6)))
        self.assertEqual(a, b)


if __name__ == "__main__":
    unittest.main()
