"""End-to-end checks of the invpsh command-line tool.

Usage: cli_test.py <path-to-invpsh> <source-dir>
"""

import json
import math
import subprocess
import sys
import tempfile
import time
import unittest
from pathlib import Path

import jsonschema
from referencing import Registry, Resource

CLI = ""
SRC = Path()


def run(*args, config=None):
    cmd = [CLI, *args]
    tmp = None
    if config is not None:
        tmp = tempfile.NamedTemporaryFile("w", suffix=".json", delete=False)
        json.dump(config, tmp)
        tmp.close()
        cmd += ["--config", tmp.name]
    try:
        return subprocess.run(cmd, capture_output=True, text=True, timeout=300)
    finally:
        if tmp is not None:
            Path(tmp.name).unlink()


def schemas():
    resources = []
    for path in sorted((SRC / "docs" / "schemas").glob("*.json")):
        doc = json.loads(path.read_text())
        resources.append((doc["$id"], Resource.from_contents(doc)))
    registry = Registry().with_resources(resources)
    return registry, {uri.rsplit("/", 1)[1][:-5]: registry[uri].contents for uri, _ in resources}


REGISTRY, SCHEMAS = None, None


def validate(report, name):
    jsonschema.Draft202012Validator(SCHEMAS[name], registry=REGISTRY).validate(report)


TUBE2 = {"rank": 2, "kind": "tube"}
ANNULUS = {"rank": 2, "boxes": [{"lo": [math.exp(-2), math.exp(-2)], "hi": [math.exp(-1), math.exp(-1)]}]}

SAMPLES = {
    "levi-eval": "levi_eval.json",
    "psh-check": "psh_check.json",
    "stein-classify": "stein_annulus.json",
    "envelope": "envelope_two_squares.json",
    "potential-eval": "potential_eval.json",
}


class Samples(unittest.TestCase):
    def test_samples_validate(self):
        for command, sample in SAMPLES.items():
            with self.subTest(command=command):
                p = subprocess.run([CLI, command, "--config", str(SRC / "samples" / sample)],
                                   capture_output=True, text=True, timeout=300)
                self.assertEqual(p.returncode, 0, p.stderr)
                validate(json.loads(p.stdout), command)

    def test_published_examples_validate(self):
        for path in sorted((SRC / "docs" / "examples").glob("*.json")):
            with self.subTest(example=path.name):
                validate(json.loads(path.read_text()), path.stem)

    def test_quartic_counterexample(self):
        p = run("psh-check", config={"model": {"rank": 1, "kind": "tube"}, "function": {"expr": "t1^2"}})
        self.assertEqual(p.returncode, 0, p.stderr)
        rep = json.loads(p.stdout)["report"]
        self.assertEqual(rep["verdict"], "PshNotStrict")
        self.assertLess(abs(rep["witness_point"][0]), 1e-6)

    def test_negated_modulus(self):
        p = run("psh-check", config={"model": {"rank": 1, "kind": "tube"}, "function": {"expr": "-(t1)"}})
        self.assertEqual(json.loads(p.stdout)["report"]["verdict"], "NotPsh")

    def test_annulus_classification(self):
        tube = json.loads(run("stein-classify", config={"model": TUBE2, "shadow": ANNULUS}).stdout)
        self.assertEqual(tube["classification"]["verdict"], "Stein")
        nt = json.loads(run("envelope", config={"model": {"rank": 2, "kind": "non_tube"}, "shadow": ANNULUS}).stdout)
        self.assertEqual(nt["input_classification"]["verdict"], "NotStein")
        self.assertEqual(nt["envelope_classification"]["verdict"], "Stein")
        self.assertEqual(nt["envelope"]["boxes"], [{"lo": [0.0, 0.0], "hi": [math.exp(-1), math.exp(-1)]}])


class Exits(unittest.TestCase):
    def assert_error(self, p, code, kind):
        self.assertEqual(p.returncode, code, p.stderr)
        err = json.loads(p.stderr)
        validate(err, "error")
        self.assertEqual(err["error"]["kind"], kind)
        return err["error"]

    def test_unknown_key(self):
        p = run("levi-eval", config={"model": TUBE2, "function": {"expr": "t1"}, "points": [[0.1, 0.2]], "gird_n": 3})
        self.assertIn("gird_n", self.assert_error(p, 2, "config")["message"])

    def test_malformed_shadow(self):
        p = run("stein-classify", config={"model": TUBE2, "shadow": {"rank": 2, "boxes": [{"lo": [0.5, 0.5]}]}})
        self.assert_error(p, 2, "config")
        p = run("stein-classify", config={"model": TUBE2, "shadow": {"rank": 2, "boxes": [{"lo": [0.6], "hi": [0.5]}]}})
        self.assert_error(p, 2, "config")

    def test_bad_expression_reports_position(self):
        p = run("levi-eval", config={"model": TUBE2, "function": {"expr": "t1 + * t2"}, "points": [[0.1, 0.2]]})
        self.assertEqual(self.assert_error(p, 2, "parse")["position"], 5)

    def test_not_json(self):
        with tempfile.NamedTemporaryFile("w", suffix=".json") as f:
            f.write("{model:")
            f.flush()
            p = subprocess.run([CLI, "psh-check", "--config", f.name], capture_output=True, text=True)
        self.assert_error(p, 2, "config")

    def test_missing_config(self):
        p = run("psh-check")
        self.assert_error(p, 2, "config")

    def test_evaluation_error(self):
        p = run("levi-eval", config={"model": {"rank": 1, "kind": "tube"}, "function": {"expr": "log(t1 - 0.5)"},
                                     "points": [[0.1]]})
        self.assert_error(p, 3, "evaluation")

    def test_verify_factor_one_fails_calibration(self):
        p = run("verify", config={"short_coeff_factor": 1})
        self.assertEqual(p.returncode, 1)
        rep = json.loads(p.stdout)
        validate(rep, "verify")
        failed = {s["name"]: s for s in rep["suites"] if not s["passed"]}
        self.assertIn("calibration", failed)
        self.assertAlmostEqual(failed["calibration"]["worst"], 4.0, delta=1e-6)

    def test_verify_coarse_grid(self):
        p = run("verify", config={"grid_n": 2})
        self.assertEqual(p.returncode, 0, p.stdout[-2000:])
        self.assertTrue(json.loads(p.stdout)["passed"])


class Determinism(unittest.TestCase):
    def test_byte_identical_reports(self):
        for command, sample in SAMPLES.items():
            with self.subTest(command=command):
                args = [CLI, command, "--config", str(SRC / "samples" / sample)]
                a = subprocess.run(args, capture_output=True, timeout=300).stdout
                b = subprocess.run(args, capture_output=True, timeout=300).stdout
                self.assertEqual(a, b)

    def test_verify_seed(self):
        with tempfile.TemporaryDirectory() as d:
            outs = []
            for name in ("a", "b"):
                out = Path(d) / name
                p = subprocess.run([CLI, "verify", "--seed", "7", "--out", str(out)], capture_output=True, timeout=300)
                self.assertEqual(p.returncode, 0)
                outs.append(out.read_bytes())
            self.assertEqual(outs[0], outs[1])
            self.assertEqual(json.loads(outs[0])["seed"], 7)

    def test_verify_runtime(self):
        t0 = time.monotonic()
        p = run("verify")
        self.assertEqual(p.returncode, 0)
        self.assertLess(time.monotonic() - t0, 60.0)


if __name__ == "__main__":
    CLI, SRC = sys.argv[1], Path(sys.argv[2])
    REGISTRY, SCHEMAS = schemas()
    unittest.main(argv=sys.argv[:1], verbosity=2)
