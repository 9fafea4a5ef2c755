"""Tests for the Merge operad, its actions and the syntax/morphology boundary."""
from __future__ import annotations

from django.test import SimpleTestCase

from .. import morphology, operads
from ..dm import AssemblyOp
from ..errors import ArityMismatchError, ColorMismatchError, HoleIndexError, MatchError
from ..export import to_dot
from ..labels import Atom, bundle_of
from ..morphology import bundle_at
from ..notation import parse
from ..trees import Tree
from ..operads import (
    GammaSM,
    act_MS,
    act_SO,
    check_grading,
    colored_insert_domh,
    compose_by_insertions,
    decompose_ms,
    forget_morphology,
    gamma_SO_MO,
    insert_SO_at_leaf,
    operad_compose,
    operad_insert,
    unit,
    verify_correspondence,
    verify_exchange_law,
)

TWO_WAYS = (
    "((α1 α2)(α3 (α4 α5))); (φ11 (φ12 φ13)), (φ21 φ22), (φ31 (φ32 (φ33 φ34))), "
    "((φ41 φ42)(φ43 φ44)), (φ51 ((φ52 φ53) φ54))"
)


class OperadCompositionTests(SimpleTestCase):
    def setUp(self) -> None:
        self.x = parse("(•1 •2)", "operad")

    def test_partial_insertion(self):
        self.assertEqual(operad_insert(self.x, 1, self.x), parse("((•1 •2) •3)", "operad"))
        self.assertEqual(operad_insert(self.x, 2, self.x), parse("(•1 (•2 •3))", "operad"))

    def test_hole_out_of_range(self):
        with self.assertRaises(HoleIndexError):
            operad_insert(self.x, 3, self.x)

    def test_full_composition(self):
        composed = operad_compose(self.x, [self.x, unit()])
        self.assertEqual(composed, parse("((•1 •2) •3)", "operad"))
        self.assertEqual(compose_by_insertions(self.x, [self.x, unit()]), composed)

    def test_composition_arity_mismatch(self):
        with self.assertRaises(ArityMismatchError):
            operad_compose(self.x, [self.x])

    def test_exchange_law(self):
        y = parse("(•1 (•2 •3))", "operad")
        for i in (1, 2, 3):
            for j in (1, 2):
                self.assertTrue(verify_exchange_law(y, self.x, self.x, i, j), (i, j))

    def test_bare_holes_numbered_in_reading_order(self):
        self.assertEqual(parse("(• (• •))", "operad").text, "(•1 (•2 •3))")


class ActionTests(SimpleTestCase):
    def setUp(self) -> None:
        self.x = parse("(•1 •2)", "operad")

    def test_act_on_syntactic_objects(self):
        self.assertEqual(act_SO(self.x, [parse("a"), parse("(b c)")]), parse("(a (b c))"))

    def test_morphological_input_rejected(self):
        with self.assertRaises(ColorMismatchError):
            act_SO(self.x, [parse("a"), parse("(α β)", "mo")])

    def test_no_action_on_morphology(self):
        self.assertFalse(hasattr(operads, "act_MO"))
        self.assertFalse(hasattr(morphology, "act_MO"))

    def test_act_on_morphosyntactic_trees(self):
        args = [parse("{α @ a}", "ms"), parse("{β @ b}", "ms")]
        self.assertEqual(act_MS(self.x, args), parse("({α @ a} {β @ b})", "ms"))

    def test_insert_syntactic_object_at_leaf(self):
        self.assertEqual(insert_SO_at_leaf(self.x, 1, parse("(a b)")).text, "(•1 (a b))")
        with self.assertRaises(HoleIndexError):
            insert_SO_at_leaf(self.x, 3, parse("a"))
        with self.assertRaises(ColorMismatchError):
            insert_SO_at_leaf(self.x, 2, parse("(α β)", "mo"))

    def test_grading(self):
        self.assertTrue(check_grading(self.x, [parse("a"), parse("(b c)")], act_SO, lambda t: t.leaf_count))

    def test_coloured_insertion(self):
        x = parse("[a| a b]", "so")
        y = parse("[a| a c]", "so")
        self.assertEqual(colored_insert_domh(x, 1, y), parse("[a| b [a| a c]]", "so"))
        with self.assertRaises(ColorMismatchError):
            colored_insert_domh(x, 2, y)

    def test_colour_unit_is_an_identity(self):
        x = parse("[a| a b]", "so")
        for leaf, leaf_tree in enumerate(x.leaves(), start=1):
            self.assertEqual(colored_insert_domh(x, leaf, Tree.leaf(leaf_tree.label)), x)
        self.assertEqual(colored_insert_domh(Tree.leaf(Atom("a")), 1, x), x)
        with self.assertRaises(ColorMismatchError):
            colored_insert_domh(Tree.leaf(Atom("b")), 1, x)


class BoundaryTests(SimpleTestCase):
    def setUp(self) -> None:
        self.t = parse("(a b)", "so")
        self.s = parse("(α β)", "mo")
        self.gamma = GammaSM.of([(bundle_of(["α", "β"]), Atom("a"))])

    def test_insertion_at_admissible_leaf(self):
        ms = gamma_SO_MO(self.t, [self.s, None], self.gamma)
        self.assertEqual(ms.text, "(b {α,β @ a| α β})")

    def test_inadmissible_pair(self):
        with self.assertRaises(MatchError) as caught:
            gamma_SO_MO(self.t, [self.s, None], GammaSM())
        self.assertEqual(caught.exception.leaf, 1)

    def test_decompose_inverts_insertion(self):
        ms = gamma_SO_MO(self.t, [self.s, None], self.gamma)
        skeleton, args = decompose_ms(ms)
        self.assertEqual(skeleton, self.t)
        self.assertEqual(args, [self.s, None])
        self.assertEqual(forget_morphology(ms), self.t)


class TwoWaysTests(SimpleTestCase):
    """One morphosyntactic tree built by inserting first, or by composing first."""

    def setUp(self) -> None:
        self.op = parse(TWO_WAYS, "assembly")
        self.gamma = GammaSM.of(
            (bundle_at(arg), leaf.label) for arg, leaf in zip(self.op.args, self.op.skeleton.leaves())
        )

    def test_five_boundaries(self):
        rendered = self.op.render(self.gamma)
        self.assertEqual(to_dot(rendered).count("doubleoctagon"), 5)
        self.assertEqual(forget_morphology(rendered), self.op.skeleton)
        self.assertEqual(AssemblyOp.from_tree(rendered), self.op)

    def test_correspondence(self):
        t_op = parse("(• (• •))", "operad")
        parts = [parse("(α1 α2)"), parse("α3"), parse("(α4 α5)")]
        args = self.op.args
        morph_args = [args[0:2], args[2:3], args[3:5]]
        self.assertTrue(verify_correspondence(t_op, parts, morph_args, self.gamma))
