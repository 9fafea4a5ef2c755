"""Tests for morphological objects, Δ^ρ and fission splits."""
from __future__ import annotations

from django.test import SimpleTestCase

from ..errors import EmptySplitError, InventoryError, StructureError, UnknownFeatureError
from ..labels import Feature, Inventory, Valuation, bundle_of
from ..morphology import (
    build_morph,
    bundle_at,
    check_comodule,
    coproduct_rho,
    fission_intersections,
    fission_split,
    is_morph_object,
    simplify_unary,
    validate_ext,
)
from ..notation import parse
from ..trees import Forest, QuotientMode, quotient


class BuildMorphTests(SimpleTestCase):
    def test_vertices_carry_unions(self):
        self.assertEqual(build_morph(["α", ["β", "φ"]]).text, "{α,β,φ| α {β,φ| β φ}}")

    def test_repeated_feature_collapses_in_bundle(self):
        t = build_morph([["α", "φ"], ["β", "φ"]])
        self.assertEqual(bundle_at(t), bundle_of(["α", "β", "φ"]))
        self.assertTrue(is_morph_object(t))

    def test_parenthesised_morph_text(self):
        t = parse("((φ α)(β γ))", "mo")
        self.assertEqual(t.text, "{α,β,γ,φ| {α,φ| α φ} {β,γ| β γ}}")


class ValidationTests(SimpleTestCase):
    def test_uncovered_leaf(self):
        report = validate_ext(parse("{α| α β}"))
        self.assertFalse(report.is_valid)
        self.assertIn("covering", {v.condition for v in report.violations})

    def test_loose_bundle_without_unary_vertex(self):
        report = validate_ext(parse("{α,β,γ| α β}"))
        self.assertEqual([v.condition for v in report.violations], ["tightness"])

    def test_loose_bundle_over_unary_vertex_is_allowed(self):
        self.assertTrue(validate_ext(parse("{α,β,γ| α {β|β}}")).is_valid)

    def test_parse_reports_violations(self):
        with self.assertRaises(StructureError) as caught:
            parse("{α,β,γ| α β}", "mo")
        self.assertEqual(caught.exception.details["violations"][0]["condition"], "tightness")

    def test_unknown_feature(self):
        inventory = Inventory(categories={"α": frozenset({Valuation.BARE})})
        with self.assertRaises(UnknownFeatureError):
            parse("(α ζ)", "mo", inventory)
        self.assertTrue(issubclass(UnknownFeatureError, InventoryError))

    def test_unvalued_marker(self):
        inventory = Inventory(categories={"case": frozenset({Valuation.UNVALUED})})
        self.assertEqual(inventory.parse_feature("caseu"), Feature("case", Valuation.UNVALUED))


class ComoduleTests(SimpleTestCase):
    def setUp(self) -> None:
        self.t = parse("{α,β,γ,δ| α {β,γ,δ| β {γ,δ| γ δ}}}", "mo")

    def test_rho_quotient_keeps_unary_vertex(self):
        result = quotient(self.t, [(1, 0)], QuotientMode.RHO)
        self.assertEqual(result.text, "{α,β,γ,δ| α {β,γ,δ| {γ,δ| γ δ}}}")
        self.assertTrue(validate_ext(result).is_valid)
        self.assertFalse(is_morph_object(result))

    def test_coproduct_contains_the_quotient(self):
        total = coproduct_rho(Forest.of(self.t))
        expected = parse("{α,β,γ,δ| α {β,γ,δ| {γ,δ| γ δ}}}", "mo")
        self.assertEqual(total.coefficient(parse("β", "mo"), expected), 1)

    def test_comodule_laws(self):
        self.assertTrue(check_comodule(Forest.of(parse("((α β) γ)", "mo"))))


class FissionSplitTests(SimpleTestCase):
    def setUp(self) -> None:
        self.s = parse("{φ,α,β,γ| {φ,α| φ α} {β,γ| β γ}}", "mo")

    def test_split_on_two_features(self):
        target = bundle_of(["φ", "γ"])
        self.assertEqual(fission_split(self.s, target, simplify=False), parse("{φ,γ| {φ|φ} {γ|γ}}"))
        self.assertEqual(fission_split(self.s, target), parse("{φ,γ| φ γ}", "mo"))

    def test_split_on_three_features(self):
        target = bundle_of(["φ", "α", "β"])
        self.assertEqual(fission_split(self.s, target, simplify=False), parse("{φ,α,β| {φ,α| φ α} {β|β}}"))
        self.assertEqual(fission_split(self.s, target), parse("{φ,α,β| {φ,α| φ α} β}", "mo"))

    def test_intersection_table(self):
        table = fission_intersections(self.s, bundle_of(["φ", "γ"]))
        self.assertEqual(table[0][2], bundle_of(["φ", "γ"]))
        self.assertEqual(sum(1 for _, _, meet in table if not meet), 2)

    def test_disjoint_target(self):
        with self.assertRaises(EmptySplitError):
            fission_split(self.s, bundle_of(["ζ"]))

    def test_simplify_is_idempotent(self):
        once = simplify_unary(parse("{φ,γ| {φ|φ} {γ|γ}}"))
        self.assertEqual(simplify_unary(once), once)
