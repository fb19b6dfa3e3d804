import contextlib
import io
import json
import os
import tempfile
import unittest

from cli.main import main

DATA_DIR = os.path.join(os.path.dirname(__file__), "..", "data")
CASE_STUDY = os.path.join(DATA_DIR, "ieee14.txt")
TOY = os.path.join(DATA_DIR, "toy_bridge2.txt")
PATH3 = os.path.join(DATA_DIR, "toy_path3.txt")


def run(*argv):
    out = io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(io.StringIO()):
        code = main(list(argv))
    return code, out.getvalue()


def data_rows(path):
    with open(path) as handle:
        lines = [line.rstrip("\n") for line in handle if not line.startswith("#")]
    return [line.split(",") for line in lines[1:]]


class TestAnalyze(unittest.TestCase):

    def test_case_study(self):
        with tempfile.TemporaryDirectory() as first, tempfile.TemporaryDirectory() as second:
            self.assertEqual(run("analyze", CASE_STUDY, "--out-dir", first, "-q")[0], 0)
            self.assertEqual(run("analyze", CASE_STUDY, "--out-dir", second, "-q")[0], 0)
            self.assertEqual(len(data_rows(os.path.join(first, "pi.csv"))), 20)
            self.assertEqual(len(data_rows(os.path.join(first, "weights.csv"))), 59)
            for name in ("flows.csv", "lodf.csv", "pi.csv", "weights.csv"):
                with open(os.path.join(first, name)) as a, open(os.path.join(second, name)) as b:
                    self.assertEqual(a.read(), b.read(), name)

    def test_bridge_toy(self):
        with tempfile.TemporaryDirectory() as out:
            self.assertEqual(run("analyze", TOY, "--out-dir", out, "-q")[0], 0)
            rows = data_rows(os.path.join(out, "pi.csv"))
            self.assertEqual(len(rows), 1)
            self.assertEqual(rows[0][2], "1")

    def test_missing_file(self):
        with tempfile.TemporaryDirectory() as out:
            self.assertEqual(run("analyze", os.path.join(out, "nope.txt"), "--out-dir", out)[0], 3)


class TestPlanAndValidate(unittest.TestCase):

    def test_unsat(self):
        code, out = run("plan", PATH3, "--backend", "enumerative", "-q")
        self.assertEqual(code, 1)
        self.assertIn("status: unsat", out)

    def test_missing_solver(self):
        code, _ = run("plan", TOY, "--solver-cmd", "no-such-smt-solver-binary", "-q")
        self.assertEqual(code, 3)

    def test_plan_then_validate(self):
        with tempfile.TemporaryDirectory() as out:
            plan_path = os.path.join(out, "plan.txt")
            code, _ = run("plan", TOY, "--backend", "enumerative", "--out", plan_path, "-q")
            self.assertEqual(code, 0)
            self.assertEqual(run("validate", TOY, plan_path, "-q")[0], 0)

            code, out_json = run("validate", TOY, plan_path, "--json")
            self.assertEqual(code, 0)
            result = json.loads(out_json)
            self.assertTrue(result["valid"])
            self.assertGreaterEqual(result["cs_achieved"], 50)
            self.assertTrue(result["failure_audit"]["consistent"])

            with open(plan_path) as handle:
                text = handle.read()
            with open(plan_path, "w") as handle:
                handle.write(text.replace("1,1,VISIT,1,5000", "1,1,VISIT,1,4000"))
            code, out_json = run("validate", TOY, plan_path, "--json")
            self.assertEqual(code, 1)
            self.assertIn("start", {v["rule"] for v in json.loads(out_json)["violations"]})

    def test_validate_checks_the_required_mode(self):
        with tempfile.TemporaryDirectory() as out:
            plan_path = os.path.join(out, "plan.txt")
            code, _ = run("plan", TOY, "--backend", "enumerative", "--cyclic", "--out", plan_path, "-q")
            self.assertEqual(code, 0)
            self.assertEqual(run("validate", TOY, plan_path, "--cyclic", "-q")[0], 0)

            code, out_json = run("validate", TOY, plan_path, "--json")
            self.assertEqual(code, 1)
            self.assertIn("cyclic", {v["rule"] for v in json.loads(out_json)["violations"]})

    def test_emit_smt2_needs_no_solver_run(self):
        with tempfile.TemporaryDirectory() as out:
            script = os.path.join(out, "model.smt2")
            code, _ = run("plan", TOY, "--solver-cmd", "no-such-smt-solver-binary", "--emit-smt2", script, "-q")
            self.assertEqual(code, 3)
            with open(script) as handle:
                self.assertIn("(check-sat)", handle.read())


class TestMinUavs(unittest.TestCase):

    def test_one_uav_suffices(self):
        code, out = run("min-uavs", TOY, "--backend", "enumerative", "-q")
        self.assertEqual(code, 0)
        self.assertIn("minimum fleet: 1", out)

    def test_all_unsat(self):
        self.assertEqual(run("min-uavs", PATH3, "--backend", "enumerative", "-q")[0], 1)

    def test_two_watchers_needed(self):
        with open(PATH3) as handle:
            text = handle.read()
        text = (text.replace("2 1 3 2 1 1 3", "2 1 3 2 1 2 3")
                    .replace("1 100 100 2 1", "1 100 100 2 1\n2 100 100 2 1")
                    .replace("100 0", "60 0"))
        with tempfile.TemporaryDirectory() as out:
            path = os.path.join(out, "two.txt")
            with open(path, "w") as handle:
                handle.write(text)
            code, stdout = run("min-uavs", path, "--backend", "enumerative", "-q")
            self.assertEqual(code, 0)
            self.assertIn("1 UAVs: unsat", stdout)
            self.assertIn("minimum fleet: 2", stdout)
            self.assertEqual(run("min-uavs", path, "--backend", "enumerative", "--cs", "30", "-q")[1].splitlines()[-1],
                             "minimum fleet: 1")


class TestSweep(unittest.TestCase):

    def test_tc_sweep_with_chart(self):
        with tempfile.TemporaryDirectory() as out:
            code, _ = run("sweep", TOY, "--variable", "tc", "--values", "1,2,4", "--backend", "enumerative",
                          "--jobs", "2", "--out-dir", out, "--svg", "-q")
            self.assertEqual(code, 0)
            rows = data_rows(os.path.join(out, "sweep_tc.csv"))
            self.assertEqual([r[0] for r in rows], ["1", "2", "4"])
            self.assertEqual({r[1] for r in rows}, {"sat"})
            with open(os.path.join(out, "sweep_tc.svg")) as handle:
                self.assertIn("<polyline", handle.read())

    def test_failing_row_is_recorded(self):
        with tempfile.TemporaryDirectory() as out:
            code, _ = run("sweep", TOY, "--variable", "n_uavs", "--values", "1,3", "--backend", "enumerative",
                          "--out-dir", out, "-q")
            self.assertEqual(code, 0)
            rows = data_rows(os.path.join(out, "sweep_n_uavs.csv"))
            self.assertEqual([r[1] for r in rows], ["sat", "error"])

    def test_fixed_uses_sweep_names(self):
        with tempfile.TemporaryDirectory() as out:
            code, _ = run("sweep", TOY, "--variable", "tc", "--values", "4", "--fixed", "cs=100",
                          "--backend", "enumerative", "--out-dir", out, "-q")
            self.assertEqual(code, 0)
            rows = data_rows(os.path.join(out, "sweep_tc.csv"))
            self.assertEqual([(r[1], r[2]) for r in rows], [("sat", "100.00")])
            code, _ = run("sweep", TOY, "--variable", "tc", "--values", "4", "--fixed", "weather=1",
                          "--backend", "enumerative", "--out-dir", out, "-q")
            self.assertEqual(code, 3)

    def test_unsorted_values(self):
        with tempfile.TemporaryDirectory() as out:
            code, _ = run("sweep", TOY, "--variable", "tc", "--values", "4,1", "--out-dir", out, "-q")
            self.assertEqual(code, 3)


if __name__ == "__main__":
    unittest.main()
