"""Tests for canonical trees, forests and extractions."""
from __future__ import annotations

from django.test import SimpleTestCase

from ..errors import ArityError, LeafCutError, OverlapError, RootMixError
from ..labels import Atom
from ..notation import parse
from ..syntax import coproduct
from ..trees import (
    ROOT,
    CopyCancellation,
    Forest,
    QuotientMode,
    Tree,
    accessible_terms,
    canonicalize,
    cancelled_copies,
    graft,
    nonoverlapping_vertex_sets,
    quotient,
    root_cut,
)


class CanonicalFormTests(SimpleTestCase):
    def test_children_are_sorted(self):
        self.assertEqual(parse("((b c) a)").text, "(a (b c))")
        self.assertEqual(parse("(b a)"), parse("(a b)"))

    def test_encoding_ignores_child_order(self):
        self.assertEqual(canonicalize(parse("(c (b a))")), canonicalize(parse("((a b) c)")))

    def test_more_than_two_children_rejected(self):
        a = Tree.leaf(Atom("a"))
        with self.assertRaises(ArityError):
            Tree.node(a, a, a)

    def test_size_and_leaves(self):
        t = parse("(a (b c))")
        self.assertEqual(t.size, 5)
        self.assertEqual(t.leaf_count, 3)
        self.assertEqual([leaf.text for leaf in t.leaves()], ["a", "b", "c"])


class QuotientTests(SimpleTestCase):
    def setUp(self) -> None:
        self.t = parse("(a (b c))")

    def test_three_modes(self):
        self.assertEqual(quotient(self.t, [(1,)], QuotientMode.C).text, "(<(b c)> a)")
        self.assertEqual(quotient(self.t, [(1,)], QuotientMode.RHO).text, "(a)")
        self.assertEqual(quotient(self.t, [(1,)], QuotientMode.D).text, "a")

    def test_removing_root_gives_unit(self):
        for mode in QuotientMode:
            self.assertIsNone(quotient(self.t, [()], mode))

    def test_overlapping_extraction_rejected(self):
        with self.assertRaises(OverlapError):
            quotient(self.t, [(1,), (1, 0)], QuotientMode.D)

    def test_root_with_other_vertex_rejected(self):
        with self.assertRaises(RootMixError):
            quotient(self.t, [(), (0,)], QuotientMode.D)

    def test_trace_text_parses_back(self):
        traced = quotient(self.t, [(1,)], QuotientMode.C)
        self.assertEqual(parse(traced.text), traced)


class ForestTests(SimpleTestCase):
    def test_components_are_unordered(self):
        self.assertEqual(parse("a ⊔ (b c)", "forest"), parse("(b c) ⊔ a", "forest"))
        self.assertEqual(Forest.unit().text, "1")

    def test_graft_and_root_cut_are_inverse(self):
        ws = parse("a ⊔ (b c)", "forest")
        self.assertEqual(root_cut(graft(ws)), ws)

    def test_root_cut_of_leaf(self):
        with self.assertRaises(LeafCutError):
            root_cut(parse("a"))


class ExtractionTests(SimpleTestCase):
    def test_nonoverlapping_sets_of_cherry(self):
        self.assertEqual(len(nonoverlapping_vertex_sets(parse("(a b)"))), 5)

    def test_accessible_terms_include_the_root(self):
        t = parse("(a b)")
        terms = accessible_terms(t)
        self.assertEqual(len(terms), 3)
        self.assertIn((ROOT, t), terms)

    def test_canonical_copies_are_cancelled(self):
        t = parse("(a (a b))")
        self.assertEqual(cancelled_copies(t, frozenset({(0,)})), frozenset({(0,), (1, 0)}))
        self.assertEqual(quotient(t, cancelled_copies(t, frozenset({(0,)})), QuotientMode.D), parse("b"))

    def test_coproduct_of_leaf(self):
        a = parse("a")
        total = coproduct(Forest.of(a), QuotientMode.D)
        self.assertEqual(len(total), 2)
        self.assertEqual(total.coefficient(a, None), 1)
        self.assertEqual(total.coefficient(None, a), 1)

    def test_coproduct_of_cherry(self):
        ws = Forest.of(parse("(a b)"))
        total = coproduct(ws, QuotientMode.D, CopyCancellation.CANONICAL)
        self.assertEqual(len(total), 5)
        self.assertEqual(total.coefficient(parse("a ⊔ b", "forest"), None), 1)
        self.assertEqual(total.coefficient(parse("a"), parse("b")), 1)

    def test_d_coassociativity_holds_on_support_only(self):
        ws = Forest.of(parse("(a b)"))
        both = parse("a ⊔ b", "forest")
        for policy in CopyCancellation:
            delta = lambda f, p=policy: coproduct(f, QuotientMode.D, p)  # noqa: E731
            total = delta(ws)
            left, right = total.apply_on_factor(0, delta), total.apply_on_factor(1, delta)
            self.assertNotEqual(left, right)
            self.assertEqual(left.support(), right.support())
            self.assertEqual(left.coefficient(both, None, None), 2)
            self.assertEqual(right.coefficient(both, None, None), 1)
