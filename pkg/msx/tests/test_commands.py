"""Tests for the msx management command."""
from __future__ import annotations

import json
import tempfile
from io import StringIO
from pathlib import Path

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import TestCase

from ..models import Binding, VerificationRun, Workspace

SMALL = {"verify": {"budget": 3, "comodule_leaves": 2, "merge_leaves": 2}}


class MsxCommandTests(TestCase):
    def setUp(self) -> None:
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)
        self.dir = Path(self.tmp.name)
        self.config = self.dir / "msx.json"
        self.config.write_text(json.dumps(SMALL), encoding="utf-8")

    def _call(self, *args: str) -> str:
        out = StringIO()
        call_command("msx", *args, stdout=out)
        return out.getvalue()

    def test_parse_inline(self):
        self.assertIn("(a b)", self._call("parse", "(b a)", "--inline", "--kind", "so"))

    def test_parse_json_output(self):
        output = self._call("parse", "((φ α)(β γ))", "--inline", "--kind", "mo", "--format", "json")
        self.assertEqual(json.loads(output)["kind"], "tree")

    def test_parse_file(self):
        source = self.dir / "tree.txt"
        source.write_text("[AGR| V {α,β @ AGR| α β}]\n", encoding="utf-8")
        self.assertIn("{α,β @ AGR| α β}", self._call("parse", str(source), "--kind", "ms"))

    def test_parse_error_exits_with_one(self):
        with self.assertRaises(CommandError) as caught:
            self._call("parse", "(a b", "--inline")
        self.assertEqual(caught.exception.returncode, 1)
        self.assertIn("syntax", str(caught.exception))

    def test_bind_needs_session(self):
        with self.assertRaises(CommandError):
            self._call("parse", "a", "--inline", "--bind", "x")

    def test_bind_then_run(self):
        self._call("parse", "a ⊔ b", "--inline", "--kind", "forest", "--session", "demo", "--bind", "ws")
        self.assertTrue(Binding.objects.filter(workspace__name="demo", name="ws").exists())
        script = self.dir / "merge.json"
        script.write_text(json.dumps({"steps": [{"op": "merge_all"}]}), encoding="utf-8")
        output = self._call("run", str(script), "--session", "demo", "--target", "@ws", "--bind", "merged")
        self.assertIn("result: 2·(a b)", output)
        self.assertEqual(Binding.objects.get(name="merged").kind, "sum")

    def test_export_dot_to_file(self):
        target = self.dir / "tree.dot"
        output = self._call("export", "[AGR| V {α,β @ AGR| α β}]", "--inline", "--kind", "ms", "--output", str(target))
        self.assertIn("Wrote", output)
        self.assertIn("doubleoctagon", target.read_text(encoding="utf-8"))

    def test_verify_passes(self):
        Workspace.objects.create(name="demo")
        output = self._call("verify", "merge", "--config", str(self.config), "--session", "demo")
        self.assertIn("1 suite(s) passed", output)
        self.assertEqual(VerificationRun.objects.filter(workspace__name="demo", passed=True).count(), 1)

    def test_verify_mutant_exits_with_two(self):
        with self.assertRaises(CommandError) as caught:
            self._call("verify", "comodule", "--config", str(self.config), "--mutant", "quotient-swap")
        self.assertEqual(caught.exception.returncode, 2)

    def test_config_check(self):
        output = self._call("config", "check", "--config", str(self.config))
        self.assertIn("Config is valid.", output)

    def test_unknown_session(self):
        with self.assertRaises(CommandError):
            self._call("export", "@ws", "--session", "nobody")
