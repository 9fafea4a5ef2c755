"""Tests for the text notation, JSON encoding and DOT export."""
from __future__ import annotations

from fractions import Fraction

from django.test import SimpleTestCase

from .. import notation
from ..errors import InventoryError, NotationSyntaxError, StructureError
from ..export import export, to_dot
from ..labels import Feature, FeatureBundle, Inventory, Valuation
from ..notation import parse
from ..trees import Tree


class ParseTests(SimpleTestCase):
    def test_unbalanced_parenthesis(self):
        with self.assertRaises(NotationSyntaxError) as caught:
            parse("(a b", "so")
        self.assertEqual(caught.exception.code, "syntax")

    def test_trailing_input(self):
        with self.assertRaises(NotationSyntaxError):
            parse("(a b) c")

    def test_mixed_holes(self):
        with self.assertRaises(StructureError):
            parse("(•1 •)", "operad")

    def test_unknown_kind(self):
        with self.assertRaises(StructureError):
            parse("a", "graph")

    def test_closed_atom_inventory(self):
        inventory = Inventory(atoms=frozenset({"a", "b"}))
        self.assertEqual(parse("(a b)", "so", inventory).text, "(a b)")
        with self.assertRaises(InventoryError):
            parse("(a z)", "so", inventory)

    def test_empty_workspace(self):
        self.assertTrue(parse("1", "forest").is_unit)

    def test_sum_terms_and_coefficients(self):
        total = notation.parse_sum("2·(a b) ⊗ 1 + c ⊗ d")
        self.assertEqual(total.arity, 2)
        self.assertEqual(total.coefficient(parse("(a b)"), None), Fraction(2))
        self.assertEqual(total.text(), "c ⊗ d + 2·(a b) ⊗ 1")

    def test_sum_arity_must_agree(self):
        with self.assertRaises(StructureError):
            notation.parse_sum("a ⊗ b + c")

    def test_zero_sum(self):
        self.assertEqual(notation.parse_sum("0").text(), "0")


class JsonTests(SimpleTestCase):
    def test_values_survive_json(self):
        values = [
            parse("[AGR| V {α,β @ AGR| α β}]", "ms"),
            parse("(a b) ⊔ c", "forest"),
            notation.parse_sum("1/2·(a b) ⊗ c"),
            parse("(a b); (α β), 1", "assembly"),
        ]
        for value in values:
            self.assertEqual(notation.loads(notation.dumps(value)), value)

    def test_kind_of(self):
        self.assertEqual(notation.kind_of(parse("a")), "tree")
        self.assertEqual(notation.kind_of(parse("a ⊔ b", "forest")), "forest")
        self.assertEqual(notation.kind_of(parse("(a b); 1, 1", "assembly")), "assembly")

    def test_invalid_json(self):
        with self.assertRaises(NotationSyntaxError):
            notation.loads("{not json")

    def test_unknown_value_kind(self):
        with self.assertRaises(StructureError):
            notation.from_json({"kind": "graph"})


class ExportTests(SimpleTestCase):
    def test_dot_marks_boundaries(self):
        dot = to_dot(parse("[AGR| V {α,β @ AGR| α β}]", "ms"))
        self.assertTrue(dot.startswith('digraph "msx" {'))
        self.assertEqual(dot.count("doubleoctagon"), 1)
        self.assertIn("shape=box", dot)
        self.assertIn("shape=ellipse", dot)

    def test_text_export(self):
        self.assertEqual(export(parse("(b a)"), "text").strip(), "(a b)")


class UnvaluedFeatureTests(SimpleTestCase):
    def setUp(self) -> None:
        case, num = Feature("case", Valuation.UNVALUED), Feature("num", Valuation.PLUS)
        self.tree = Tree(FeatureBundle.of(case, num), (Tree.leaf(case), Tree.leaf(num)))

    def test_json_keeps_the_valuation(self):
        self.assertEqual(notation.from_json(notation.to_json(self.tree)), self.tree)

    def test_declared_category_reads_the_marker(self):
        inventory = Inventory(categories={"case": frozenset({Valuation.UNVALUED}), "num": frozenset({Valuation.PLUS})})
        self.assertEqual(parse(self.tree.text, "mo", inventory), self.tree)

    def test_open_inventory_reads_a_bare_category(self):
        leaves = {leaf.label for leaf in parse(self.tree.text, "mo").leaves()}
        self.assertEqual(leaves, {Feature("caseu"), Feature("num", Valuation.PLUS)})
