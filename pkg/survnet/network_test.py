import os
import unittest

from sympy import Rational

from ingest.parser import load_scenario
from ingest.scenario import Segment, UavSpec
from ingest.generator import ScenarioGenerator
from survnet.fuel import fly_cost, refuel_level, reserve
from survnet.network import DisconnectedNetwork, DuplicateSegment, build_net

DATA_DIR = os.path.join(os.path.dirname(__file__), "..", "data")


class TestBuildNet(unittest.TestCase):

    def setUp(self):
        self.spec = load_scenario(os.path.join(DATA_DIR, "ieee14.txt"))
        self.net = build_net(self.spec)

    def test_explicit_ratio_and_reverse(self):
        self.assertEqual(self.net.ratio[(15, 16)], Rational(19, 20))
        self.assertEqual(self.net.ratio[(16, 15)], Rational(20, 19))
        self.assertAlmostEqual(self.net.cost_ratio(16, 15), 1 / 0.95)

    def test_missing_ratio_is_level(self):
        self.assertEqual(self.net.ratio[(1, 18)], 1)
        self.assertEqual(self.net.ratio[(18, 1)], 1)

    def test_properties(self):
        net = self.net
        self.assertEqual(net.tb[4], 0)
        for p in net.points:
            for q in net.adj[p]:
                self.assertIn(p, net.adj[q])
                self.assertEqual(net.ratio[(p, q)] * net.ratio[(q, p)], 1)
                self.assertLessEqual(abs(net.tb[p] - net.tb[q]), 1)

    def test_base_neighbours(self):
        for q in self.net.adj[4]:
            self.assertEqual(self.net.tb[q], 1)
        self.assertEqual(self.net.leg(4), 1)
        self.assertEqual(self.net.leg(5), 1)

    def test_smallest_net(self):
        spec = load_scenario(os.path.join(DATA_DIR, "toy_bridge2.txt"))
        net = build_net(spec)
        self.assertEqual(net.adj, {1: (2,), 2: (1,)})
        self.assertEqual(net.tb, {1: 0, 2: 1})

    def test_path_distances(self):
        spec = load_scenario(os.path.join(DATA_DIR, "toy_path3.txt"))
        self.assertEqual(build_net(spec).tb, {1: 0, 3: 1, 2: 2})

    def test_duplicate_segment(self):
        spec = load_scenario(os.path.join(DATA_DIR, "toy_path3.txt"))
        twice = spec.replace(segments=spec.segments + (Segment(3, 1, 1.0),), n_segments=3)
        with self.assertRaises(DuplicateSegment):
            build_net(twice)

    def test_disconnected(self):
        spec = load_scenario(os.path.join(DATA_DIR, "toy_path3.txt"))
        cut = spec.replace(segments=spec.segments[:1], n_segments=1)
        with self.assertRaises(DisconnectedNetwork):
            build_net(cut)

    def test_generated_nets_connected(self):
        for seed in range(10):
            spec = ScenarioGenerator(seed).generate()
            net = build_net(spec)
            self.assertEqual(net.tb[spec.base_point], 0)


class TestFuel(unittest.TestCase):

    def test_rounding(self):
        uav = UavSpec(1, 1200, 1500, 15, 3)
        self.assertEqual(fly_cost(uav, Rational(19, 20), 100), 1425)
        # 15 * 20/19 * 100 = 1578.94...
        self.assertEqual(fly_cost(uav, Rational(20, 19), 100), 1579)
        self.assertEqual(fly_cost(uav, Rational(1), 1), 15)

    def test_reserve_and_refuel(self):
        uav = UavSpec(1, 600, 1200, 12, 3)
        self.assertEqual(reserve(uav, 3, 100), 3600)
        self.assertEqual(refuel_level(uav, 3, 100), 116400)


if __name__ == "__main__":
    unittest.main()
