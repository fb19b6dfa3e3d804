import os
import shutil
import unittest
from unittest import mock

from cli.pipeline import prepare
from encoder.encode import encode
from ingest.generator import ScenarioGenerator
from ingest.parser import load_scenario
from plan.coverage import coverage_scores
from plan.failures import inject_failures
from plan.validate import validate
from solver.decode import decode
from solver.enumerative import EnumerationLimits, solve_enumerative
from solver.external import DEFAULT_COMMAND, SOLVER_ENV, SolverBuilder, solve_external
from solver.outcome import LimitExceeded, SolverError, Status
from solver.smtlib import to_smtlib

DATA_DIR = os.path.join(os.path.dirname(__file__), "..", "data")


class TestSolverBuilder(unittest.TestCase):

    def test_env_fallback(self):
        with mock.patch.dict(os.environ, {SOLVER_ENV: "cvc5 --lang smt2"}):
            self.assertEqual(SolverBuilder().command, ("cvc5", "--lang", "smt2"))

    def test_default(self):
        with mock.patch.dict(os.environ):
            os.environ.pop(SOLVER_ENV, None)
            self.assertEqual(SolverBuilder().command, DEFAULT_COMMAND)

    def test_bad_timeout(self):
        with self.assertRaises(ValueError):
            SolverBuilder(timeout_s=0)


class TestProcess(unittest.TestCase):

    def test_missing_binary(self):
        with self.assertRaises(SolverError):
            solve_external("(check-sat)", SolverBuilder(("no-such-smt-solver-binary",)))

    @unittest.skipUnless(shutil.which("cat"), "needs cat")
    def test_garbled_output(self):
        # cat echoes the script back instead of a verdict
        outcome = solve_external("(assert false)(check-sat)", SolverBuilder(("cat",)))
        self.assertEqual(outcome.status, Status.SOLVER_ERROR)
        self.assertIsNone(outcome.assignment)

    @unittest.skipUnless(shutil.which("sleep"), "needs sleep")
    def test_timeout(self):
        outcome = solve_external("(check-sat)", SolverBuilder(("sleep", "5"), timeout_s=0.2))
        self.assertEqual(outcome.status, Status.TIMEOUT)


@unittest.skipUnless(shutil.which("z3"), "z3 not on PATH")
class TestZ3(unittest.TestCase):

    def test_contradiction(self):
        self.assertEqual(solve_external("(assert false)(check-sat)").status, Status.UNSAT)

    def test_tautology(self):
        outcome = solve_external("(assert true)(check-sat)")
        self.assertEqual(outcome.status, Status.SAT)
        self.assertEqual(outcome.assignment, {})

    def test_toy_plan(self):
        prepared = prepare(load_scenario(os.path.join(DATA_DIR, "toy_bridge2.txt")))
        model = encode(prepared.spec, prepared.net, prepared.crit)
        outcome = solve_external(to_smtlib(model), SolverBuilder(DEFAULT_COMMAND, timeout_s=60))
        self.assertEqual(outcome.status, Status.SAT)
        plan = decode(outcome.assignment, prepared.spec, prepared.net)
        self.assertEqual(validate(plan, prepared.spec, prepared.net, prepared.crit), [])

    def test_toy_unsat(self):
        prepared = prepare(load_scenario(os.path.join(DATA_DIR, "toy_path3.txt")))
        model = encode(prepared.spec, prepared.net, prepared.crit)
        self.assertEqual(solve_external(to_smtlib(model)).status, Status.UNSAT)


@unittest.skipUnless(shutil.which("z3"), "z3 not on PATH")
class TestOracleAgreement(unittest.TestCase):

    def test_generated_scenarios(self):
        limits = EnumerationLimits(max_trajectories=50000)
        for seed in range(20):
            prepared = prepare(ScenarioGenerator(seed).generate(max_points=8, max_uavs=2, max_horizon=10))
            spec, net, crit = prepared.spec, prepared.net, prepared.crit
            try:
                oracle = solve_enumerative(spec, net, crit, limits=limits)
            except LimitExceeded:
                continue
            with self.subTest(seed=seed):
                smt = solve_external(to_smtlib(encode(spec, net, crit)), SolverBuilder(timeout_s=120))
                self.assertEqual(smt.status, oracle.status)
                if smt.status != Status.SAT:
                    continue
                for assignment in (smt.assignment, oracle.assignment):
                    plan = decode(assignment, spec, net)
                    self.assertEqual(validate(plan, spec, net, crit), [])
                    self.assertEqual(inject_failures(plan, spec).passed_points,
                                     coverage_scores(plan, spec, crit).resilient_points)


@unittest.skipUnless(shutil.which("z3") and os.environ.get("GRID_SENTINEL_SLOW"), "slow; set GRID_SENTINEL_SLOW")
class TestCaseStudy(unittest.TestCase):

    def test_ieee14(self):
        prepared = prepare(load_scenario(os.path.join(DATA_DIR, "ieee14.txt")))
        spec, net, crit = prepared.spec, prepared.net, prepared.crit
        outcome = solve_external(to_smtlib(encode(spec, net, crit)), SolverBuilder(timeout_s=3600))
        self.assertEqual(outcome.status, Status.SAT)
        plan = decode(outcome.assignment, spec, net)
        self.assertEqual(validate(plan, spec, net, crit), [])
        report = coverage_scores(plan, spec, crit)
        self.assertGreaterEqual(report.cs_achieved, 80)
        self.assertGreaterEqual(report.rcs_achieved, 50)
        self.assertEqual(inject_failures(plan, spec).passed_points, report.resilient_points)


if __name__ == "__main__":
    unittest.main()
