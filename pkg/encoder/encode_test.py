import dataclasses
import os
import unittest

from cli.pipeline import prepare
from encoder.encode import encode
from encoder.model import EmptyFleet, EncodeOptions, HorizonTooShort, StrandedUav, fuel, surveilled
from encoder.terms import Linear, evaluate
from ingest.parser import load_scenario
from ingest.scenario import UavSpec
from plan.coverage import coverage_scores
from plan.plan import Event, EventKind, Plan
from solver.decode import plan_assignment

DATA_DIR = os.path.join(os.path.dirname(__file__), "..", "data")


class TestEncode(unittest.TestCase):

    def setUp(self):
        self.prepared = prepare(load_scenario(os.path.join(DATA_DIR, "toy_bridge2.txt")))

    def model(self, spec=None, options=None):
        p = self.prepared
        return encode(spec or p.spec, p.net, p.crit, options)

    def test_variable_families(self):
        model = self.model()
        # U=1, P=2, S=4: six per-(u, p, s) families, two per-(u, s), two per-(p, s), two per-point
        self.assertEqual(model.n_bools, 6 * 8 + 2 * 4 + 2 * 8 + 2 * 2)
        self.assertEqual(model.n_ints, 4)
        names = [v.name for v in model.declarations]
        self.assertEqual(len(names), len(set(names)))
        self.assertEqual(names[0], "visit_1_1_1")

    def test_rule_groups(self):
        groups = self.model().group_sizes()
        for group in ("init", "frame", "dynamics", "refuel", "visited", "freshness", "resilience", "coverage"):
            self.assertIn(group, groups)
        self.assertNotIn("cyclic", groups)
        self.assertEqual(groups["coverage"], 1)

    def test_initial_fuel(self):
        self.assertIn(("init", Linear(((1, fuel(1, 1)),), "=", 5000)), self.model().assertions)

    def test_coverage_constraint(self):
        expected = Linear(((1000000, surveilled(1)), (1000000, surveilled(2))), ">=", 50 * 20000)
        self.assertIn(("coverage", expected), self.model().assertions)

    def test_cyclic(self):
        model = self.model(self.prepared.spec.replace(cyclic=True))
        self.assertTrue(model.cyclic)
        self.assertEqual(model.group_sizes()["cyclic"], 2)
        self.assertTrue(self.model(options=EncodeOptions(cyclic=True)).cyclic)

    def test_tail_windows(self):
        waived = self.model().group_sizes()["resilience"]
        strict = self.model(options=EncodeOptions(waive_tail_windows=False)).group_sizes()["resilience"]
        self.assertEqual(strict - waived, 2 * 4)

    def test_hover_plan_satisfies_model(self):
        p = self.prepared
        plan = Plan(4, {1: tuple(Event(s, EventKind.VISIT, 1, 5000 - 100 * (s - 1)) for s in range(1, 5))})
        assignment = plan_assignment(plan, p.spec, p.net, coverage_scores(plan, p.spec, p.crit))
        model = self.model()
        self.assertTrue(all(evaluate(term, assignment) for _, term in model.assertions))

        assignment[fuel(1, 3).name] = 4900
        broken = [group for group, term in model.assertions if not evaluate(term, assignment)]
        self.assertIn("dynamics", broken)

    def test_stranded(self):
        spec = self.prepared.spec.replace(uavs=(UavSpec(2, 1, 50, 2, 1),))
        with self.assertRaises(StrandedUav):
            self.model(spec)

    def test_empty_fleet(self):
        spec = dataclasses.replace(self.prepared.spec, uavs=(), n_uavs=0)
        with self.assertRaises(EmptyFleet):
            self.model(spec)

    def test_horizon_too_short(self):
        spec = dataclasses.replace(self.prepared.spec, horizon_S=3)
        with self.assertRaises(HorizonTooShort):
            self.model(spec)


if __name__ == "__main__":
    unittest.main()
