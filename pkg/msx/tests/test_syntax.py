"""Tests for Merge, its classification and head functions."""
from __future__ import annotations

from django.test import SimpleTestCase

from ..errors import NotASuccessorError, PartialHeadError, StructureError
from ..labels import Atom
from ..notation import parse
from ..sums import WorkspaceSum
from ..syntax import (
    HeadFunction,
    MergeKind,
    Projection,
    annotate_heads,
    brute_force_merge_all,
    check_syntactic,
    classify_merge,
    coproduct_syn,
    internal_merge,
    label_by_head,
    magma_merge,
    merge_all,
    merge_pair,
    merge_successors,
    strip_heads,
)
from ..trees import Forest


class SyntacticObjectTests(SimpleTestCase):
    def test_binary_tree_accepted(self):
        t = parse("(a (b c))", "so")
        self.assertIs(check_syntactic(t), t)

    def test_unary_vertex_rejected(self):
        with self.assertRaises(StructureError):
            parse("(a)", "so")


class MagmaTests(SimpleTestCase):
    def test_magma_merge_is_commutative(self):
        a, b = parse("a"), parse("(b c)")
        self.assertEqual(magma_merge(a, b), magma_merge(b, a))
        self.assertEqual(magma_merge(a, b).text, "(a (b c))")

    def test_coproduct_of_two_leaves(self):
        total = coproduct_syn(parse("a ⊔ b", "forest"))
        self.assertEqual(len(total), 4)
        self.assertEqual(total.coefficient(parse("a"), parse("b")), 1)


class MergeTests(SimpleTestCase):
    def setUp(self) -> None:
        self.ws = parse("a ⊔ b", "forest")

    def test_external_merge_of_two_components(self):
        result = merge_pair(self.ws, parse("a"), parse("b"))
        self.assertEqual(result, WorkspaceSum.single(parse("(a b)")))

    def test_merge_all_counts_both_orders(self):
        result = merge_all(self.ws)
        self.assertEqual(result.text(), "2·(a b)")

    def test_merge_all_matches_pairwise_oracle(self):
        for text in ("a ⊔ b", "(a b) ⊔ c", "(a (b c))", "(a b) ⊔ (c d)"):
            ws = parse(text, "forest")
            self.assertEqual(merge_all(ws), brute_force_merge_all(ws), text)

    def test_missing_pair_gives_zero(self):
        self.assertFalse(merge_pair(self.ws, parse("c"), parse("b")))

    def test_internal_merge_of_commutative_magma(self):
        t = parse("(a (b c))")
        result = internal_merge(Forest.of(t), 0, (1,))
        self.assertEqual(result, WorkspaceSum.single(t))


class ClassificationTests(SimpleTestCase):
    def test_external(self):
        before = parse("a ⊔ b", "forest")
        kind = classify_merge(before, Forest.of(parse("(a b)")), (parse("a"), parse("b")))
        self.assertEqual(kind, MergeKind.EM)

    def test_internal(self):
        t = parse("(a (b c))")
        kind = classify_merge(Forest.of(t), Forest.of(t), (parse("(b c)"), parse("a")))
        self.assertEqual(kind, MergeKind.IM)

    def test_every_successor_is_classified(self):
        ws = parse("(a b) ⊔ c", "forest")
        for term, witness, _ in merge_successors(ws):
            self.assertIn(classify_merge(ws, term, witness), set(MergeKind))

    def test_not_a_successor(self):
        before = parse("a ⊔ b", "forest")
        with self.assertRaises(NotASuccessorError):
            classify_merge(before, Forest.of(parse("(a a)")), (parse("a"), parse("a")))


class HeadFunctionTests(SimpleTestCase):
    def setUp(self) -> None:
        self.s = parse("(a (b c))")
        self.h = HeadFunction.uniform(self.s, Projection.FIRST)

    def test_annotation(self):
        self.assertEqual(annotate_heads(self.s, self.h).text, "[a| a [b| b c]]")
        self.assertEqual(label_by_head(self.s, self.h)[()], Atom("a"))

    def test_strip_recovers_heads(self):
        stripped, h = strip_heads(annotate_heads(self.s, self.h))
        self.assertEqual(stripped, self.s)
        self.assertEqual(dict(h.choices), dict(self.h.choices))

    def test_toward_leaf(self):
        h = HeadFunction.toward(self.s, (1, 1))
        self.assertEqual(label_by_head(self.s, h)[()], Atom("c"))

    def test_partial_head_function(self):
        with self.assertRaises(PartialHeadError):
            HeadFunction({}).head_leaf(self.s)
