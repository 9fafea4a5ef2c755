"""Tests for fusion, fission, impoverishment, assembly and the generator semigroup."""
from __future__ import annotations

from django.test import SimpleTestCase

from .. import dm
from ..errors import (
    ArityMismatchError,
    GammaError,
    NoHeadError,
    NoInsertionError,
    NotACherryError,
    NotSubsetError,
    PartitionError,
    ScriptError,
)
from ..labels import Atom, Feature, FeatureBundle, bundle_of
from ..morphology import bundle_at
from ..notation import parse, parse_sum
from ..operads import GammaSM, insertion_of
from ..sums import WorkspaceSum
from ..trees import ROOT, Forest, Tree, root_cut

AGR_T = "[AGR| V [AGR| {α,β,γ @ AGR| α {β,γ| β γ}} {δ,ε @ T| δ ε}]]"
AGR_T_FUSED = "[AGR| V {α,β,γ,δ,ε @ AGR| {α,β,γ| α {β,γ| β γ}} {δ,ε| δ ε}}]"
FISSION_SOURCE = "[T| ASP {α,β,γ,φ @ T| α {β,γ,φ| β {γ,φ| γ φ}}}]"
OBLITERATION_SOURCE = "{φ,α,β,γ,δ| {φ,α| φ α} {β,γ,δ| β {γ,δ| γ δ}}}"


def _bundle(*names: str) -> FeatureBundle:
    return bundle_of(names)


class FusionTests(SimpleTestCase):
    def setUp(self) -> None:
        self.before = parse(AGR_T, "ms")
        self.gamma = GammaSM.of([(_bundle("α", "β", "γ", "δ", "ε"), Atom("AGR"))])

    def test_fusion_of_agreement_and_tense(self):
        self.assertEqual(dm.fusion_at(self.before, ("AGR", "T"), self.gamma), parse(AGR_T_FUSED, "ms"))

    def test_fusion_all_has_one_site(self):
        self.assertEqual(len(dm.fusion_sites(self.before)), 1)
        self.assertEqual(dm.fusion_all(self.before, self.gamma), WorkspaceSum.single(parse(AGR_T_FUSED, "ms")))

    def test_inadmissible_fusion(self):
        with self.assertRaises(GammaError):
            dm.fusion_at(self.before, ("AGR", "T"), GammaSM())
        self.assertFalse(dm.fusion_all(self.before, GammaSM()))

    def test_root_is_not_a_cherry(self):
        with self.assertRaises(NotACherryError):
            dm.fusion_at(self.before, ROOT, self.gamma)

    def test_cherry_without_head(self):
        ms = parse("({α @ a} {β @ b})", "ms")
        with self.assertRaises(NoHeadError):
            dm.fusion_at(ms, ROOT, GammaSM.of([(_bundle("α", "β"), Atom("a"))]))

    def test_fusion_diagram_commutes(self):
        op = dm.AssemblyOp.from_tree(self.before)
        s1, s2 = op.args[1], op.args[2]
        gamma = self.gamma.with_pairs((bundle_at(s1), Atom("AGR")), (bundle_at(s2), Atom("T")))
        check = dm.verify_fusion_diagram(op, (1, 2), Forest.of(s1, s2), gamma)
        self.assertTrue(check.commutes)

    def test_fusion_workspace_is_multiplicative(self):
        second = parse("[b| {ζ @ b} {η @ c}]", "ms")
        morph = parse("{ζ,η| ζ η}", "mo")
        gamma = self.gamma.with_pairs((_bundle("ζ", "η"), Atom("b")))
        ws = Forest.of(self.before, second, morph)
        product = dm.fusion_all(self.before, gamma) * dm.fusion_all(second, gamma) * WorkspaceSum.single(morph)
        self.assertEqual(dm.fusion_workspace(ws, gamma), product)
        fused = Forest.of(parse(AGR_T_FUSED, "ms"), parse("{ζ,η @ b| ζ η}", "ms"), morph)
        self.assertEqual(dm.fusion_workspace(ws, gamma), WorkspaceSum.single(fused))

    def test_fusion_workspace_without_admissible_cherry(self):
        ws = Forest.of(self.before, parse("[b| {ζ @ b} {η @ c}]", "ms"))
        self.assertFalse(dm.fusion_workspace(ws, self.gamma))


class FissionTests(SimpleTestCase):
    def setUp(self) -> None:
        self.source = parse(FISSION_SOURCE, "ms")
        self.spec = dm.FissionSpec("T", _bundle("φ"), (_bundle("α", "β"), _bundle("γ")), Atom("T"))
        self.gamma = GammaSM.of([(_bundle("α", "β", "φ"), Atom("T")), (_bundle("γ", "φ"), Atom("T"))])

    def test_both_head_assignments_agree(self):
        expected = parse_sum("2·[T| ASP [T| {α,β,φ @ T| α {β,φ| β φ}} {γ,φ @ T| γ φ}]]")
        self.assertEqual(dm.fission(self.source, self.spec, self.gamma), expected)

    def test_fission_diagram_commutes(self):
        op = dm.AssemblyOp.from_tree(self.source)
        index = next(i for i, arg in enumerate(op.args) if arg is not None)
        source = op.args[index]
        gamma = self.gamma.with_pairs((bundle_at(source), Atom("T")))
        check = dm.verify_fission_diagram(op, index, self.spec, Forest.of(source), gamma)
        self.assertFalse(check.vacuous)
        self.assertTrue(check.commutes)

    def test_partners_add_up(self):
        asp = Atom("ASP")
        gamma = self.gamma.with_pairs((_bundle("γ", "φ"), asp))
        total = dm.fission_over_partners(self.source, "T", self.spec.shared, self.spec.parts, [Atom("T"), asp], gamma)
        with_asp = dm.FissionSpec("T", self.spec.shared, self.spec.parts, asp)
        self.assertEqual(total, WorkspaceSum.total([dm.fission(self.source, self.spec, gamma), dm.fission(self.source, with_asp, gamma)]))
        self.assertEqual(len(total), 2)
        self.assertIn(parse("[T| ASP [T| {α,β,φ @ T| α {β,φ| β φ}} {γ,φ @ ASP| γ φ}]]", "ms"), [key[0][0] for key, _ in total.items()])

    def test_rejected_partners(self):
        with self.assertRaises(GammaError):
            dm.fission_over_partners(self.source, "T", self.spec.shared, self.spec.parts, [Atom("ASP")], self.gamma)
        with self.assertRaises(GammaError):
            dm.fission_over_partners(self.source, "T", self.spec.shared, self.spec.parts, [], self.gamma)

    def test_parts_must_partition(self):
        spec = dm.FissionSpec("T", _bundle("φ"), (_bundle("α"), _bundle("γ")), Atom("T"))
        with self.assertRaises(PartitionError):
            dm.fission(self.source, spec, self.gamma)

    def test_inadmissible_fission(self):
        with self.assertRaises(GammaError):
            dm.fission(self.source, self.spec, GammaSM())


class FissionCutTests(SimpleTestCase):
    def setUp(self) -> None:
        self.s = parse(OBLITERATION_SOURCE, "mo")

    def test_aligned_cut_is_the_root_cut(self):
        parts = (_bundle("φ", "α"), _bundle("β", "γ", "δ"))
        self.assertEqual(dm.fission_cut(self.s, FeatureBundle(), parts), root_cut(self.s))

    def test_scattered_cut_differs_from_the_root_cut(self):
        parts = (_bundle("φ", "γ"), _bundle("α", "β", "δ"))
        cut = dm.fission_cut(self.s, FeatureBundle(), parts)
        self.assertNotEqual(cut, root_cut(self.s))
        self.assertEqual(cut, Forest.of(parse("{φ,γ| φ γ}", "mo"), parse("{α,β,δ| α {β,δ| β δ}}", "mo")))

    def test_cut_checks_the_partition(self):
        with self.assertRaises(PartitionError):
            dm.fission_cut(self.s, FeatureBundle(), (_bundle("φ", "α"), _bundle("β")))


class ObliterationTests(SimpleTestCase):
    def setUp(self) -> None:
        self.source = parse(FISSION_SOURCE, "ms")

    def test_obliterate_keeps_the_atom(self):
        self.assertEqual(dm.obliterate(self.source, "T").text, "[T| ASP T]")

    def test_obliterate_bare_leaf(self):
        with self.assertRaises(NoInsertionError):
            dm.obliterate(self.source, "ASP")


class ImpoverishmentTests(SimpleTestCase):
    def setUp(self) -> None:
        self.s = parse(OBLITERATION_SOURCE, "mo")
        self.x = Atom("x")
        self.op = dm.AssemblyOp(Tree.leaf(self.x), (self.s,))

    def _gamma(self, kept: FeatureBundle) -> GammaSM:
        bundle = bundle_at(self.s)
        return GammaSM.of([(bundle, self.x), (kept, self.x), (bundle - kept, self.x)])

    def test_remove_leading_pair(self):
        removed = _bundle("φ", "α")
        gamma = self._gamma(_bundle("β", "γ", "δ"))
        result = dm.impoverish_subset(self.op.render(gamma), ROOT, removed, gamma)
        self.assertEqual(result, parse("{β,γ,δ @ x| β {γ,δ| γ δ}}", "ms"))
        pipeline = dm.oblit_pipeline(Forest.of(self.s), self.op, 0, removed, gamma)
        self.assertEqual(pipeline.assembled, result)

    def test_remove_scattered_pair(self):
        removed = _bundle("φ", "γ")
        gamma = self._gamma(_bundle("α", "β", "δ"))
        result = dm.impoverish_subset(self.op.render(gamma), ROOT, removed, gamma)
        self.assertEqual(result, parse("{α,β,δ @ x| α {β,δ| β δ}}", "ms"))
        pipeline = dm.oblit_pipeline(Forest.of(self.s), self.op, 0, removed, gamma)
        self.assertEqual(pipeline.assembled, result)

    def test_obliteration_pipeline_needs_both_fission_pieces(self):
        gamma = GammaSM.of([(bundle_at(self.s), self.x), (_bundle("β", "γ", "δ"), self.x)])
        result = dm.impoverish_subset(self.op.render(gamma), ROOT, _bundle("φ", "α"), gamma)
        self.assertEqual(result.label.bundle, _bundle("β", "γ", "δ"))
        with self.assertRaises(GammaError):
            dm.oblit_pipeline(Forest.of(self.s), self.op, 0, _bundle("φ", "α"), gamma)

    def test_obliteration_pipeline_keeps_discarded_branch(self):
        gamma = self._gamma(_bundle("β", "γ", "δ"))
        pipeline = dm.oblit_pipeline(Forest.of(self.s), self.op, 0, _bundle("φ", "α"), gamma)
        self.assertEqual(pipeline.discarded.children, (parse("{φ,α| φ α}", "mo"),))
        self.assertIn(pipeline.discarded, list(pipeline.workspace))

    def test_whole_bundle_is_not_a_proper_subset(self):
        gamma = self._gamma(_bundle("β", "γ", "δ"))
        with self.assertRaises(NotSubsetError):
            dm.impoverish_subset(self.op.render(gamma), ROOT, bundle_at(self.s), gamma)

    def test_unmarked_feature_sits_above_the_survivor(self):
        kappa = Feature("κ")
        kept = _bundle("β", "γ", "δ")
        gamma = GammaSM.of([(bundle_at(self.s), self.x), (kept | FeatureBundle.of(kappa), self.x)])
        result = dm.impoverish_subset(self.op.render(gamma), ROOT, _bundle("φ", "α"), gamma, unmarked=kappa)
        self.assertEqual(result.label.bundle, _bundle("β", "γ", "δ", "κ"))
        self.assertEqual(result.label.atom, self.x)
        self.assertEqual(insertion_of(result).children, (parse("{β,γ,δ| β {γ,δ| γ δ}}", "mo"),))

    def test_unmarked_feature_is_gated_by_gamma(self):
        gamma = self._gamma(_bundle("β", "γ", "δ"))
        with self.assertRaises(GammaError):
            dm.impoverish_subset(self.op.render(gamma), ROOT, _bundle("φ", "α"), gamma, unmarked=Feature("κ"))

    def test_trace_keeps_fused_bundle(self):
        gamma = self._gamma(_bundle("φ", "α"))
        spec = dm.FissionSpec(ROOT, FeatureBundle(), (_bundle("β", "γ", "δ"), _bundle("φ", "α")), self.x)
        result = dm.impoverish_trace(self.op.render(gamma), spec, gamma)
        self.assertEqual(insertion_of(result), parse("{φ,α,β,γ,δ| {φ,α| φ α}}", "mo"))

    def test_trace_pipeline(self):
        gamma = self._gamma(_bundle("β", "γ", "δ"))
        spec = dm.FissionSpec(0, FeatureBundle(), (_bundle("β", "γ", "δ"), _bundle("φ", "α")), self.x)
        pipeline = dm.impov_pipeline(Forest.of(self.s), self.op, 0, spec, gamma)
        local = dm.FissionSpec(ROOT, spec.shared, spec.parts, self.x)
        self.assertEqual(pipeline.assembled, dm.impoverish_trace(self.op.render(gamma), local, gamma))
        self.assertEqual(pipeline.assembled.text, "{α,β,γ,δ,φ @ x| {α,φ| α φ}}")
        self.assertEqual(pipeline.discarded, parse("{β,γ,δ| β {γ,δ| γ δ}}", "mo"))

    def test_trace_rejects_what_fission_rejects(self):
        gamma = GammaSM.of([(bundle_at(self.s), self.x), (_bundle("φ", "α"), self.x)])
        parts = (_bundle("β", "γ", "δ"), _bundle("φ", "α"))
        local = dm.FissionSpec(ROOT, FeatureBundle(), parts, self.x)
        rendered = self.op.render(gamma)
        with self.assertRaises(GammaError):
            dm.fission(rendered, local, gamma)
        with self.assertRaises(GammaError):
            dm.impoverish_trace(rendered, local, gamma)
        with self.assertRaises(GammaError):
            dm.impov_pipeline(Forest.of(self.s), self.op, 0, dm.FissionSpec(0, FeatureBundle(), parts, self.x), gamma)

    def test_trace_rejects_empty_removed_bundle(self):
        gamma = self._gamma(_bundle("φ", "α"))
        rendered = self.op.render(gamma)
        local = dm.FissionSpec(ROOT, FeatureBundle(), (FeatureBundle(), bundle_at(self.s)), self.x)
        with self.assertRaises(PartitionError):
            dm.fission(rendered, local, gamma)
        with self.assertRaises(PartitionError):
            dm.impoverish_trace(rendered, local, gamma)
        with self.assertRaises(PartitionError):
            dm.apply_generator(dm.Impoverish(ROOT, FeatureBundle(), trace=True), rendered, gamma)


class AssemblyTests(SimpleTestCase):
    def setUp(self) -> None:
        self.t = parse("(a b)", "so")
        self.s = parse("(α β)", "mo")
        self.g = parse("γ", "mo")
        self.gamma = GammaSM.of([(_bundle("α", "β"), Atom("a")), (_bundle("γ"), Atom("b"))])

    def test_operator_text(self):
        op = parse("(a b); (α β), 1", "assembly")
        self.assertEqual(op.arity, 2)
        self.assertEqual(op.text(), "(a b); {α,β| α β}, 1")

    def test_operator_arity(self):
        with self.assertRaises(ArityMismatchError):
            dm.AssemblyOp(self.t, (self.s,))

    def test_assemble_keeps_the_rest_of_the_workspace(self):
        op = dm.AssemblyOp(self.t, (self.s, None))
        result = dm.assemble_MT(op, Forest.of(self.s, self.g), self.gamma)
        self.assertEqual(result, WorkspaceSum.single(Forest.of(op.render(self.gamma), self.g)))

    def test_kt_is_the_sum_of_operators(self):
        ws = Forest.of(self.s, self.g)
        total = dm.assemble_KT(self.t, ws, self.gamma)
        self.assertEqual(total, dm.assemble_KT_expanded(self.t, ws, self.gamma))
        self.assertEqual(len(total), 1)

    def test_operators_read_back(self):
        op = dm.AssemblyOp(self.t, (self.s, self.g))
        total = WorkspaceSum.single(op.render(self.gamma))
        self.assertEqual(dm.as_operators(total), [(op, 1)])


class SemigroupTests(SimpleTestCase):
    def setUp(self) -> None:
        self.op = dm.AssemblyOp.from_tree(parse(AGR_T, "ms"))
        s1, s2 = self.op.args[1], self.op.args[2]
        self.gamma = GammaSM.of([
            (bundle_at(s1), Atom("AGR")),
            (bundle_at(s2), Atom("T")),
            (_bundle("α", "β", "γ", "δ", "ε"), Atom("AGR")),
        ])

    def test_empty_sequence_is_identity(self):
        self.assertEqual(dm.semigroup_apply([], self.op, self.gamma), WorkspaceSum.single(self.op.render(self.gamma)))

    def test_fuse_then_obliterate(self):
        result = dm.semigroup_apply([dm.Fuse(("AGR", "T")), dm.Obliterate("AGR")], self.op, self.gamma)
        self.assertEqual(result.text(), "[AGR| AGR V]")

    def test_failing_step_is_named(self):
        with self.assertRaises(ScriptError) as caught:
            dm.semigroup_apply([dm.Obliterate("T"), dm.Obliterate("missing")], self.op, self.gamma)
        self.assertEqual(caught.exception.step, 2)
