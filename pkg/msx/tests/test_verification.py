"""Tests for the law suites and the quotient-swap mutant."""
from __future__ import annotations

from django.test import SimpleTestCase

from ..config import config_from_dict
from ..errors import ConfigError
from ..verification import MUTANTS, SUITES, run_suite, run_suites

SMALL = {
    "verify": {
        "budget": 5,
        "hopf_leaves": 2,
        "comodule_leaves": 2,
        "operad_leaves": 2,
        "assembly_leaves": 2,
        "merge_leaves": 2,
    }
}


class SuiteTests(SimpleTestCase):
    def setUp(self) -> None:
        self.config = config_from_dict(SMALL)

    def test_every_suite_passes(self):
        for name in SUITES:
            report = run_suite(name, self.config)
            failures = [law.name for law in report.laws if not law.passed]
            self.assertTrue(report.passed, f"{name}: {failures}")
            self.assertEqual(report.lines()[-1], "PASSED")

    def test_report_is_reproducible(self):
        first = run_suite("merge", self.config, seed=3)
        second = run_suite("merge", self.config, seed=3)
        self.assertEqual(first.as_dict(), second.as_dict())
        self.assertEqual(first.seed, 3)
        self.assertEqual(first.budget, 5)

    def test_budget_override(self):
        self.assertEqual(run_suite("operad", self.config, budget=2).budget, 2)

    def test_random_samples_scale_with_budget(self):
        config = config_from_dict({"verify": dict(SMALL["verify"], budget=40, comodule_leaves=1)})
        self.assertEqual(run_suite("comodule", config).law("comodule-random").checked, 10)

    def test_default_scale(self):
        verify = config_from_dict({}).verify
        self.assertEqual(verify.budget, 1000)
        self.assertEqual(verify.operad_leaves, 5)

    def test_run_suites(self):
        reports = run_suites(["hopf", "merge"], self.config)
        self.assertEqual([report.suite for report in reports], ["hopf", "merge"])


class MutantTests(SimpleTestCase):
    def setUp(self) -> None:
        self.config = config_from_dict(SMALL)

    def test_quotient_swap_is_caught(self):
        self.assertIn("quotient-swap", MUTANTS)
        report = run_suite("comodule", self.config, mutant="quotient-swap")
        self.assertFalse(report.passed)
        self.assertEqual(report.lines()[-1], "FAILED")
        self.assertIn("golden-quotient", [law.name for law in report.laws if not law.passed])
        self.assertEqual(report.as_dict()["mutant"], "quotient-swap")

    def test_unknown_suite(self):
        with self.assertRaises(ConfigError):
            run_suite("galois", self.config)

    def test_unknown_mutant(self):
        with self.assertRaises(ConfigError):
            run_suite("hopf", self.config, mutant="flip-sign")
