import os
import unittest

from cli.pipeline import prepare
from encoder.encode import encode
from encoder.terms import INT, Var, conj, implies, linear, neg
from ingest.parser import load_scenario
from solver.outcome import SolverError
from solver.smtlib import parse_sexprs, read_model, render, to_smtlib

DATA_DIR = os.path.join(os.path.dirname(__file__), "..", "data")

Z3_MODEL = """\
sat
(
  (define-fun visit_1_1_1 () Bool
    true)
  (define-fun fuel_1_2 () Int
    (- 5))
  (define-fun |odd name| () Int
    12)
)
"""


def toy_script():
    prepared = prepare(load_scenario(os.path.join(DATA_DIR, "toy_bridge2.txt")))
    return to_smtlib(encode(prepared.spec, prepared.net, prepared.crit))


class TestEmission(unittest.TestCase):

    def test_deterministic(self):
        self.assertEqual(toy_script(), toy_script())

    def test_script_shape(self):
        script = toy_script()
        self.assertIn("(set-logic QF_LIA)\n", script)
        self.assertIn("(declare-const visit_1_1_1 Bool)\n", script)
        self.assertIn("(declare-const fuel_1_4 Int)\n", script)
        self.assertIn("(assert (= fuel_1_1 5000))\n", script)
        self.assertTrue(script.endswith("(check-sat)\n(get-model)\n"))

    def test_render_sum(self):
        term = linear([(1, Var("a")), (-2, Var("n", INT))], ">=", -3)
        self.assertEqual(render(term), "(>= (+ (ite a 1 0) (* (- 2) n)) (- 3))")

    def test_render_connectives(self):
        a, b, c = Var("a"), Var("b"), Var("c")
        self.assertEqual(render(implies(a, conj(neg(b), c))), "(=> a (and (not b) c))")


class TestReadModel(unittest.TestCase):

    def test_z3_model(self):
        exprs = parse_sexprs(Z3_MODEL)
        self.assertEqual(exprs[0], "sat")
        self.assertEqual(read_model(exprs[1:]), {"visit_1_1_1": True, "fuel_1_2": -5, "odd name": 12})

    def test_comments_and_strings(self):
        exprs = parse_sexprs('; header\n(error "line 3: unknown (constant)")\nunsat\n')
        self.assertEqual(exprs, [["error", '"line 3: unknown (constant)"'], "unsat"])

    def test_unbalanced(self):
        with self.assertRaises(SolverError):
            parse_sexprs("(define-fun a () Bool true")
        with self.assertRaises(SolverError):
            parse_sexprs("sat)")

    def test_bad_value(self):
        with self.assertRaises(SolverError):
            read_model(parse_sexprs("((define-fun a () Real (/ 1 2)))"))


if __name__ == "__main__":
    unittest.main()
