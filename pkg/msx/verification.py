"""Law suites over enumerated and seeded random instances.

Each suite enumerates every instance up to the leaf bound configured for it
(``verify.*_leaves``) and then draws ``budget`` seeded random instances (a quarter
of it for the Hopf and comodule suites, one leaf past the bound). Random
instances use fresh atoms and features, so the pieces of one instance never
collide. A law that cannot be exercised on an instance (an assembly rejected
by Γ_SM, say) counts the instance as vacuous instead of checked.
"""
from __future__ import annotations

import logging
import random
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, count, permutations, product
from typing import Any, Callable, Dict, Iterator, List, Optional, Sequence, Tuple

from . import dm
from .config import ProjectConfig
from .errors import ColorMismatchError, ConfigError, GammaError, MsxError, ScriptError, StructureError
from .export import to_dot
from .labels import Atom, Feature, FeatureBundle
from .morphology import (
    build_morph,
    bundle_at,
    comodule_report,
    coproduct_rho,
    fission_intersections,
    fission_split,
    is_morph_object,
    leaf_multiset,
    simplify_unary,
    validate_ext,
)
from .notation import parse, parse_sum
from .operads import (
    GammaSM,
    act_MS,
    act_SO,
    arity,
    boundaries,
    check_grading,
    check_morphism,
    compose_by_insertions,
    decompose_ms,
    forget_morphology,
    gamma_SO_MO,
    hole,
    insertion_of,
    ms_grade,
    operad_compose,
    operad_insert,
    unit,
    verify_correspondence,
    verify_exchange_law,
)
from .sums import WorkspaceSum
from .syntax import (
    HeadFunction,
    Projection,
    annotate_heads,
    brute_force_merge_all,
    classify_merge,
    coproduct,
    internal_merge,
    label_by_head,
    merge_all,
    merge_successors,
)
from .trees import (
    ROOT,
    CopyCancellation,
    Forest,
    QuotientMode,
    Tree,
    contract_unary,
    graft,
    is_prefix,
    nonoverlapping_vertex_sets,
    quotient,
    root_cut,
    substitute_leaves,
    subtree,
    vertices,
)

logger = logging.getLogger(__name__)

MUTANTS = ("quotient-swap",)

# nesting three operad levels grows too fast past this many leaves
_NESTED_BOUND = 5
# hopf and comodule draw one random instance per this many budget units
_RANDOM_SHARE = 4


@dataclass
class LawResult:
    name: str
    checked: int = 0
    failures: int = 0
    vacuous: int = 0
    counterexample: Optional[Dict[str, str]] = None

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def check(self, predicate: Callable[[], bool], **values: Any) -> bool:
        """Evaluate one instance; the first failing instance is kept as the counterexample."""
        error: Optional[MsxError] = None
        try:
            ok = bool(predicate())
        except MsxError as exc:
            ok, error = False, exc
        self.checked += 1
        if not ok:
            self.failures += 1
            if self.counterexample is None:
                self.counterexample = {name: _show(value) for name, value in values.items()}
                if error is not None:
                    self.counterexample["error"] = f"{error.code}: {error}"
        return ok

    def skip(self) -> None:
        self.vacuous += 1

    def as_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "passed": self.passed,
            "checked": self.checked,
            "failures": self.failures,
            "vacuous": self.vacuous,
            "counterexample": self.counterexample,
        }


@dataclass
class SuiteReport:
    suite: str
    seed: int
    budget: int
    mutant: Optional[str] = None
    laws: List[LawResult] = field(default_factory=list)

    def law(self, name: str) -> LawResult:
        for existing in self.laws:
            if existing.name == name:
                return existing
        created = LawResult(name)
        self.laws.append(created)
        return created

    @property
    def passed(self) -> bool:
        return all(law.passed for law in self.laws)

    def as_dict(self) -> Dict[str, Any]:
        return {
            "suite": self.suite,
            "seed": self.seed,
            "budget": self.budget,
            "mutant": self.mutant,
            "passed": self.passed,
            "laws": [law.as_dict() for law in self.laws],
        }

    def lines(self) -> List[str]:
        out = [f"suite {self.suite} seed={self.seed} budget={self.budget}" + (f" mutant={self.mutant}" if self.mutant else "")]
        for law in self.laws:
            status = "pass" if law.passed else "FAIL"
            extra = f", {law.vacuous} vacuous" if law.vacuous else ""
            out.append(f"  {status} {law.name}: {law.checked} checked, {law.failures} failed{extra}")
            if law.counterexample:
                for name, value in law.counterexample.items():
                    out.append(f"      {name}: {value}")
        out.append("PASSED" if self.passed else "FAILED")
        return out


def _show(value: Any) -> str:
    if isinstance(value, (Tree, Forest)):
        return value.text
    if isinstance(value, (WorkspaceSum, dm.AssemblyOp)):
        return value.text()
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_show(item) for item in value) + "]"
    if value is None:
        return "1"
    return str(value)


# enumeration


@lru_cache(maxsize=None)
def shapes(n: int) -> Tuple[Tree, ...]:
    """Every non-planar full binary tree with ``n`` bare-hole leaves."""
    if n < 1:
        return ()
    if n == 1:
        return (hole(),)
    found = set()
    for k in range(1, n // 2 + 1):
        for left in shapes(k):
            for right in shapes(n - k):
                found.add(Tree.node(left, right))
    return tuple(sorted(found, key=lambda t: t.sort_key))


def label_leaves(shape: Tree, leaves: Sequence[Tree]) -> Tree:
    tree, _ = substitute_leaves(shape, dict(enumerate(leaves)))
    return tree


def bundle_up(t: Tree) -> Tree:
    """Label every internal vertex with the union of its children's bundles."""
    if t.is_leaf:
        return t
    children = tuple(bundle_up(child) for child in t.children)
    return Tree(FeatureBundle.of(*(bundle_at(child) for child in children)), children)


def _distinct(trees: Iterator[Tree]) -> List[Tree]:
    return sorted(set(trees), key=lambda t: t.sort_key)


def syntactic_trees(atoms: Sequence[Atom], n: int) -> List[Tree]:
    return _distinct(
        label_leaves(shape, [Tree.leaf(atom) for atom in choice])
        for shape in shapes(n)
        for choice in product(atoms, repeat=n)
    )


def morph_trees(features: Sequence[Feature], n: int) -> List[Tree]:
    return _distinct(
        bundle_up(label_leaves(shape, [Tree.leaf(feature) for feature in choice]))
        for shape in shapes(n)
        for choice in product(features, repeat=n)
    )


def operad_elements(n: int) -> List[Tree]:
    return _distinct(
        label_leaves(shape, [hole(i) for i in order])
        for shape in shapes(n)
        for order in permutations(range(1, n + 1))
    )


def workspaces(trees: Sequence[Tree], max_leaves: int, max_components: Optional[int] = None) -> Iterator[Forest]:
    """Every non-empty multiset of ``trees`` with at most ``max_leaves`` leaves in total."""
    pool = sorted(trees, key=lambda t: t.sort_key)
    limit = max_components if max_components is not None else max_leaves

    def extend(start: int, budget: int, chosen: List[Tree]) -> Iterator[Forest]:
        if chosen:
            yield Forest.of(*chosen)
        if len(chosen) == limit:
            return
        for index in range(start, len(pool)):
            tree = pool[index]
            if tree.leaf_count <= budget:
                yield from extend(index, budget - tree.leaf_count, chosen + [tree])

    yield from extend(0, max_leaves, [])


def _tuples(by_arity: Dict[int, List[Tree]], slots: int, max_total: int) -> Iterator[Tuple[Tree, ...]]:
    """Tuples of operad elements whose arities sum to at most ``max_total``."""
    if slots == 0:
        yield ()
        return
    for n, elements in by_arity.items():
        if n + slots - 1 > max_total:
            continue
        for head in elements:
            for rest in _tuples(by_arity, slots - 1, max_total - n):
                yield (head,) + rest


def _chunks(items: Sequence[Tree], sizes: Sequence[int]) -> List[List[Tree]]:
    out, start = [], 0
    for size in sizes:
        out.append(list(items[start:start + size]))
        start += size
    return out


class InstanceFactory:
    """Seeded random instances over fresh atoms ``a1, a2, …`` and features ``f1, f2, …``."""

    def __init__(self, rng: random.Random) -> None:
        self.rng = rng
        self._atoms = count(1)
        self._features = count(1)

    def atom(self) -> Atom:
        return Atom(f"a{next(self._atoms)}")

    def feature(self) -> Feature:
        return Feature(f"f{next(self._features)}")

    def shape(self, n: int) -> Tree:
        if n == 1:
            return hole()
        k = self.rng.randint(1, n - 1)
        return Tree.node(self.shape(k), self.shape(n - k))

    def operad(self, n: int) -> Tree:
        order = list(range(1, n + 1))
        self.rng.shuffle(order)
        return label_leaves(self.shape(n), [hole(i) for i in order])

    def syntactic(self, n: int) -> Tree:
        return label_leaves(self.shape(n), [Tree.leaf(self.atom()) for _ in range(n)])

    def morph(self, n: int) -> Tree:
        return bundle_up(label_leaves(self.shape(n), [Tree.leaf(self.feature()) for _ in range(n)]))

    def head_function(self, s: Tree) -> HeadFunction:
        return HeadFunction({
            path: self.rng.choice((Projection.FIRST, Projection.SECOND))
            for path, node in vertices(s) if not node.is_leaf
        })

    def headed(self, n: int) -> Tree:
        s = self.syntactic(n)
        return annotate_heads(s, self.head_function(s))

    def assembly(self, leaves: int, morph_leaves: Tuple[int, int] = (1, 3), coverage: float = 1.0) -> Tuple[dm.AssemblyOp, GammaSM]:
        """A headed skeleton with morphological arguments on some leaves and the Γ_SM admitting them."""
        skeleton = self.headed(leaves)
        args = [
            self.morph(self.rng.randint(*morph_leaves)) if self.rng.random() < coverage else None
            for _ in range(leaves)
        ]
        gamma = GammaSM.of(
            (bundle_at(arg), leaf.label) for arg, leaf in zip(args, skeleton.leaves()) if arg is not None
        )
        return dm.AssemblyOp(skeleton, tuple(args)), gamma

    def ms(self, leaves: int) -> Tree:
        op, gamma = self.assembly(leaves, coverage=0.7)
        return op.render(gamma)

    def partition(self, bundle: FeatureBundle, shared_max: int) -> Tuple[FeatureBundle, FeatureBundle, FeatureBundle]:
        """A shared part A and two non-empty disjoint parts covering ``bundle`` minus A."""
        features = sorted(bundle)
        self.rng.shuffle(features)
        shared_size = self.rng.randint(0, min(shared_max, len(features) - 2))
        shared, rest = features[:shared_size], features[shared_size:]
        cut = self.rng.randint(1, len(rest) - 1)
        return FeatureBundle.of(*shared), FeatureBundle.of(*rest[:cut]), FeatureBundle.of(*rest[cut:])


@dataclass
class SuiteContext:
    config: ProjectConfig
    rng: random.Random
    budget: int
    rho: QuotientMode
    report: SuiteReport
    factory: InstanceFactory = field(init=False)

    def __post_init__(self) -> None:
        self.factory = InstanceFactory(self.rng)

    def law(self, name: str) -> LawResult:
        return self.report.law(name)


def _parse_mo(text: str) -> Tree:
    return parse(text, "mo")


def _bundle(*names: str) -> FeatureBundle:
    return FeatureBundle.of(*(Feature(name) for name in names))


def _closure_gamma(ms: Tree) -> GammaSM:
    return GammaSM.of((node.label.bundle, node.label.atom) for _, node in boundaries(ms))


def _reassembles(ms: Tree) -> bool:
    skeleton, args = decompose_ms(ms)
    return gamma_SO_MO(skeleton, args, _closure_gamma(ms)) == ms


# hopf


def _coassociative(total: WorkspaceSum, delta: Callable[[Forest], WorkspaceSum]) -> Tuple[WorkspaceSum, WorkspaceSum]:
    return total.apply_on_factor(0, delta), total.apply_on_factor(1, delta)


def _unit_terms(total: WorkspaceSum, side: int) -> Dict[Tuple[Forest, ...], Any]:
    return {key: c for key, c in total.items() if key[side].is_unit}


def _hopf_laws(ctx: SuiteContext, ws: Forest, prefix: str = "") -> None:
    rho = ctx.rho
    delta_rho = lambda f: coproduct(f, rho)  # noqa: E731
    delta_d = lambda f: coproduct(f, QuotientMode.D)  # noqa: E731
    total_rho, total_d = delta_rho(ws), delta_d(ws)

    lhs, rhs = _coassociative(total_rho, delta_rho)
    ctx.law(f"{prefix}coassociativity-rho").check(lambda: lhs == rhs, workspace=ws, left=lhs, right=rhs)
    if not prefix:
        lhs_d, rhs_d = _coassociative(total_d, delta_d)
        ctx.law("coassociativity-d-support").check(lambda: lhs_d.support() == rhs_d.support(), workspace=ws)
        delta_dc = lambda f: coproduct(f, QuotientMode.D, CopyCancellation.CANONICAL)  # noqa: E731
        lhs_dc, rhs_dc = _coassociative(delta_dc(ws), delta_dc)
        ctx.law("coassociativity-d-canonical-support").check(
            lambda: lhs_dc.support() == rhs_dc.support(), workspace=ws
        )
        ctx.law("counit-left").check(
            lambda: _unit_terms(total_d, 0) == {(Forest.unit(), ws): 1}, workspace=ws, coproduct=total_d
        )
    ctx.law(f"{prefix}counit-right").check(
        lambda: _unit_terms(total_rho, 1) == {(ws, Forest.unit()): 1}, workspace=ws, coproduct=total_rho
    )
    if len(ws) > 1:
        head, rest = Forest.of(ws[0]), ws.without(0)
        ctx.law(f"{prefix}multiplicativity").check(
            lambda: total_rho == delta_rho(head) * delta_rho(rest), workspace=ws
        )


def _tree_laws(ctx: SuiteContext, t: Tree) -> None:
    for chosen in nonoverlapping_vertex_sets(t):
        cut = quotient(t, chosen, QuotientMode.D)
        kept = Counter(leaf.text for leaf in cut.leaves()) if cut is not None else Counter()
        expected = Counter(leaf.text for leaf in t.leaves())
        for v in chosen:
            expected -= Counter(leaf.text for leaf in subtree(t, v).leaves())
        ctx.law("quotient-leaves").check(lambda: kept == expected, tree=t, extracted=sorted(chosen))
        rho_cut = quotient(t, chosen, ctx.rho)
        contracted = contract_unary(rho_cut) if rho_cut is not None else None
        ctx.law("rho-then-contract").check(lambda: contracted == cut, tree=t, extracted=sorted(chosen))


def hopf_suite(ctx: SuiteContext) -> None:
    bound = ctx.config.verify.hopf_leaves
    atoms = [Atom("a"), Atom("b")]
    features = [Feature("f"), Feature("g")]
    trees = [t for n in range(1, bound + 1) for t in syntactic_trees(atoms, n)]
    for t in trees:
        _tree_laws(ctx, t)
    for ws in workspaces(trees, bound):
        _hopf_laws(ctx, ws)
        if len(ws) <= 2:
            ctx.law("root-cut-graft").check(lambda: root_cut(graft(ws)) == ws, workspace=ws)
    for x, y in product(syntactic_trees(atoms, 1) + syntactic_trees(atoms, 2), repeat=2):
        ctx.law("canonical-commutativity").check(lambda: Tree.node(x, y) == Tree.node(y, x), first=x, second=y)
    morph = [t for n in range(1, bound + 1) for t in morph_trees(features, n)]
    for ws in workspaces(morph, bound):
        _hopf_laws(ctx, ws, prefix="morph-")
    for _ in range(max(1, ctx.budget // _RANDOM_SHARE)):
        leaves = bound + 1
        first = ctx.rng.randint(1, leaves)
        parts = [ctx.factory.syntactic(first)] + ([ctx.factory.syntactic(leaves - first)] if first < leaves else [])
        _hopf_laws(ctx, Forest.of(*parts))


# comodule


def _as_spec(t: Tree) -> Any:
    if t.is_leaf:
        return t.label
    return tuple(_as_spec(child) for child in t.children)


def comodule_suite(ctx: SuiteContext) -> None:
    bound = ctx.config.verify.comodule_leaves
    features = [Feature("f"), Feature("g")]
    morph = [t for n in range(1, bound + 1) for t in morph_trees(features, n)]
    for t in morph:
        ctx.law("build-morph-tight").check(
            lambda: build_morph(_as_spec(t)) == t and is_morph_object(t), tree=t
        )
        root = bundle_at(t)
        for size in range(1, len(root) + 1):
            for target in _subsets(root, size):
                split = fission_split(t, target)
                ctx.law("fission-split").check(
                    lambda: validate_ext(split).is_valid and bundle_at(split) == target,
                    tree=t,
                    target=target.text(),
                    split=split,
                )
    for sample in workspaces(morph, bound):
        report = comodule_report(sample, ctx.rho)
        ctx.law("comodule-coassociativity").check(lambda: report.coassociative, sample=sample)
        ctx.law("comodule-counit").check(lambda: report.counit, sample=sample)
        ctx.law("bicomodule-compatibility").check(lambda: report.compatible, sample=sample)
        ctx.law("left-channel-closure").check(lambda: report.left_closed, sample=sample)
        for key, _ in coproduct_rho(sample, ctx.rho).items():
            for quotient_tree in key[1]:
                ctx.law("right-channel-closure").check(
                    lambda: validate_ext(quotient_tree).is_valid, sample=sample, quotient=quotient_tree
                )
                simplified = simplify_unary(quotient_tree)
                ctx.law("simplify-unary").check(
                    lambda: bundle_at(simplified) == bundle_at(quotient_tree)
                    and leaf_multiset(simplified) == leaf_multiset(quotient_tree),
                    tree=quotient_tree,
                    simplified=simplified,
                )
    for _ in range(max(1, ctx.budget // _RANDOM_SHARE)):
        sample = Forest.of(ctx.factory.morph(bound + 1))
        ctx.law("comodule-random").check(lambda: comodule_report(sample, ctx.rho).passed, sample=sample)

    empty = coproduct_rho(Forest.unit(), ctx.rho)
    ctx.law("empty-workspace").check(
        lambda: empty == WorkspaceSum.single(Forest.unit(), Forest.unit()), coproduct=empty
    )
    source = _parse_mo("{α,β,γ,δ| α {β,γ,δ| β {γ,δ| γ δ}}}")
    beta = next(path for path, node in vertices(source) if node.label == Feature("β"))
    result = quotient(source, [beta], ctx.rho)
    expected = parse("{α,β,γ,δ| α {β,γ,δ| {γ,δ| γ δ}}}", "mo")
    ctx.law("golden-quotient").check(lambda: result == expected, got=result, expected=expected)
    ctx.law("golden-bundles").check(
        lambda: build_morph(("α", ("β", "φ"))) == _parse_mo("{α,β,φ| α {β,φ| β φ}}")
        and bundle_at(build_morph((("α", "φ"), ("β", "φ")))) == _bundle("α", "β", "φ"),
    )


def _subsets(bundle: FeatureBundle, size: int) -> Iterator[FeatureBundle]:
    for chosen in combinations(sorted(bundle), size):
        yield FeatureBundle.of(*chosen)


# operad


def _ms_args(ctx: SuiteContext, n: int) -> List[Tree]:
    return [ctx.factory.ms(ctx.rng.randint(1, 2)) for _ in range(n)]


def _algebra_laws(ctx: SuiteContext, x: Tree, ys: Sequence[Tree]) -> None:
    sizes = [arity(y) for y in ys]
    composed = operad_compose(x, ys)
    so_args = [ctx.factory.syntactic(ctx.rng.randint(1, 2)) for _ in range(sum(sizes))]
    ctx.law("so-action").check(
        lambda: act_SO(composed, so_args)
        == act_SO(x, [act_SO(y, chunk) for y, chunk in zip(ys, _chunks(so_args, sizes))]),
        operator=x,
        parts=ys,
        args=so_args,
    )
    ms_args = _ms_args(ctx, sum(sizes))
    ctx.law("ms-action").check(
        lambda: act_MS(composed, ms_args)
        == act_MS(x, [act_MS(y, chunk) for y, chunk in zip(ys, _chunks(ms_args, sizes))]),
        operator=x,
        parts=ys,
        args=ms_args,
    )
    ctx.law("so-grading").check(lambda: check_grading(composed, so_args, act_SO, lambda t: t.leaf_count), operator=composed)
    ctx.law("ms-grading").check(lambda: check_grading(composed, ms_args, act_MS, ms_grade), operator=composed)
    ctx.law("forget-square").check(
        lambda: check_morphism(composed, ms_args, act_MS, act_SO, forget_morphology), operator=composed, args=ms_args
    )


def _rejects(fn: Callable[[], Any], error: type) -> bool:
    try:
        fn()
    except error:
        return True
    return False


def operad_suite(ctx: SuiteContext) -> None:
    bound = ctx.config.verify.operad_leaves
    nested = min(bound, _NESTED_BOUND)
    by_arity = {n: operad_elements(n) for n in range(1, bound + 1)}
    for n, elements in by_arity.items():
        for x in elements:
            ctx.law("unit-laws").check(
                lambda: operad_compose(unit(), [x]) == x
                and operad_compose(x, [unit()] * n) == x
                and operad_insert(unit(), 1, x) == x
                and all(operad_insert(x, i, unit()) == x for i in range(1, n + 1)),
                element=x,
            )
    small = {n: elements for n, elements in by_arity.items() if n <= nested}
    for n, elements in small.items():
        for x in elements:
            for ys in _tuples(small, n, nested):
                composed = operad_compose(x, ys)
                ctx.law("gamma-by-insertions").check(
                    lambda: compose_by_insertions(x, ys) == composed, operator=x, parts=ys
                )
                sizes = [arity(y) for y in ys]
                for zs in _tuples(small, sum(sizes), nested):
                    ctx.law("gamma-associativity").check(
                        lambda: operad_compose(composed, zs)
                        == operad_compose(x, [operad_compose(y, chunk) for y, chunk in zip(ys, _chunks(zs, sizes))]),
                        operator=x,
                        parts=ys,
                        inputs=zs,
                    )
                _algebra_laws(ctx, x, ys)
    for (a, xs), (b, ys), (c, zs) in product(small.items(), repeat=3):
        if a + b + c - 2 > nested:
            continue
        for x, y, z in product(xs, ys, zs):
            for j in range(1, a + 1):
                for i in range(1, a + b):
                    ctx.law("exchange-law").check(
                        lambda: verify_exchange_law(x, y, z, i, j), x=x, y=y, z=z, i=i, j=j
                    )

    for _ in range(ctx.budget):
        n = ctx.rng.randint(2, bound + 2)
        x = ctx.factory.operad(n)
        ys = [ctx.factory.operad(ctx.rng.randint(1, 3)) for _ in range(n)]
        sizes = [arity(y) for y in ys]
        zs = [ctx.factory.operad(ctx.rng.randint(1, 2)) for _ in range(sum(sizes))]
        composed = operad_compose(x, ys)
        ctx.law("gamma-associativity").check(
            lambda: operad_compose(composed, zs)
            == operad_compose(x, [operad_compose(y, chunk) for y, chunk in zip(ys, _chunks(zs, sizes))]),
            operator=x,
            parts=ys,
            inputs=zs,
        )
        ctx.law("gamma-by-insertions").check(lambda: compose_by_insertions(x, ys) == composed, operator=x, parts=ys)
        y, z = ys[0], zs[0]
        j = ctx.rng.randint(1, n)
        i = ctx.rng.randint(1, n + arity(y) - 1)
        ctx.law("exchange-law").check(lambda: verify_exchange_law(x, y, z, i, j), x=x, y=y, z=z, i=i, j=j)
        _algebra_laws(ctx, x, ys)

    x = by_arity[min(2, bound)][0]
    morph = [ctx.factory.morph(2) for _ in range(arity(x))]
    ctx.law("morph-action-rejected").check(
        lambda: _rejects(lambda: act_SO(x, morph), ColorMismatchError)
        and _rejects(lambda: act_MS(x, morph), StructureError)
        and _rejects(lambda: gamma_SO_MO(x, morph, GammaSM()), StructureError),
        operator=x,
        args=morph,
    )


# correspondence


def _ms2ways(ctx: SuiteContext) -> None:
    op = parse(
        "((α1 α2)(α3 (α4 α5))); (φ11 (φ12 φ13)), (φ21 φ22), (φ31 (φ32 (φ33 φ34))), "
        "((φ41 φ42)(φ43 φ44)), (φ51 ((φ52 φ53) φ54))",
        "assembly",
    )
    gamma = GammaSM.of((bundle_at(arg), leaf.label) for arg, leaf in zip(op.args, op.skeleton.leaves()))
    t_op = parse("(• (• •))", "operad")
    parts = [parse("(α1 α2)", "so"), parse("α3", "so"), parse("(α4 α5)", "so")]
    morph_args = [list(op.args[0:2]), [op.args[2]], list(op.args[3:5])]
    rendered = op.render(gamma)
    ctx.law("golden-two-ways").check(
        lambda: verify_correspondence(t_op, parts, morph_args, gamma)
        and act_MS(t_op, [gamma_SO_MO(p, a, gamma) for p, a in zip(parts, morph_args)]) == rendered,
        assembled=rendered,
    )
    ctx.law("golden-boundary-export").check(lambda: to_dot(rendered).count("doubleoctagon") == 5, assembled=rendered)


def correspondence_suite(ctx: SuiteContext) -> None:
    bound = ctx.config.verify.operad_leaves
    candidates = [x for n in range(1, min(bound, 4) + 1) for x in operad_elements(n)]
    instances = candidates + [ctx.factory.operad(ctx.rng.randint(2, bound + 1)) for _ in range(ctx.budget)]
    for t_op in instances:
        parts = [ctx.factory.syntactic(ctx.rng.randint(1, 3)) for _ in range(arity(t_op))]
        morph_args = [
            [ctx.factory.morph(ctx.rng.randint(1, 3)) if ctx.rng.random() < 0.8 else None for _ in part.leaves()]
            for part in parts
        ]
        gamma = GammaSM.of(
            (bundle_at(arg), leaf.label)
            for part, args in zip(parts, morph_args)
            for leaf, arg in zip(part.leaves(), args)
            if arg is not None
        )
        ctx.law("compose-then-insert").check(
            lambda: verify_correspondence(t_op, parts, morph_args, gamma),
            operator=t_op,
            parts=parts,
            args=[_show(args) for args in morph_args],
        )
        assembled = act_MS(t_op, [gamma_SO_MO(p, a, gamma) for p, a in zip(parts, morph_args)])
        ctx.law("reassembly").check(lambda: _reassembles(assembled), assembled=assembled)
    _ms2ways(ctx)


# fusion


def _cherries(skeleton: Tree) -> List[Tuple[int, int]]:
    paths = skeleton.leaf_paths()
    return [(k, k + 1) for k in range(len(paths) - 1) if paths[k][:-1] == paths[k + 1][:-1]]


def _workspace_for(ctx: SuiteContext, op: dm.AssemblyOp, together: Sequence[int] = ()) -> Forest:
    """The arguments as components; those in ``together`` sit inside one larger morphological tree."""
    loose = [arg for k, arg in enumerate(op.args) if arg is not None and k not in together]
    grouped = [op.args[k] for k in together]
    if grouped and ctx.rng.random() < 0.5:
        container = grouped[0]
        for piece in grouped[1:] + [ctx.factory.morph(1)]:
            container = bundle_up(Tree.node(container, piece))
        grouped = [container]
    extra = [ctx.factory.morph(ctx.rng.randint(1, 2))] if ctx.rng.random() < 0.3 else []
    return Forest.of(*loose, *grouped, *extra)


def _fusion_instance(ctx: SuiteContext):
    leaves = ctx.rng.randint(2, max(2, ctx.config.verify.assembly_leaves))
    op, gamma = ctx.factory.assembly(leaves, coverage=0.7)
    first, second = ctx.rng.choice(_cherries(op.skeleton))
    args = list(op.args)
    leaf_atoms = [leaf.label for leaf in op.skeleton.leaves()]
    for k in (first, second):
        if args[k] is None:
            args[k] = ctx.factory.morph(ctx.rng.randint(1, 3))
            gamma = gamma.with_pairs((bundle_at(args[k]), leaf_atoms[k]))
    op = dm.AssemblyOp(op.skeleton, tuple(args))
    alpha = subtree(op.skeleton, op.skeleton.leaf_paths()[first][:-1]).label
    if ctx.rng.random() < 0.9:
        gamma = gamma.with_pairs((bundle_at(args[first]) | bundle_at(args[second]), alpha))
    return op, (first, second), gamma


def _golden_fusion(ctx: SuiteContext) -> None:
    before = parse("[AGR| V [AGR| {α,β,γ @ AGR| α {β,γ| β γ}} {δ,ε @ T| δ ε}]]", "ms")
    expected = parse("[AGR| V {α,β,γ,δ,ε @ AGR| {α,β,γ| α {β,γ| β γ}} {δ,ε| δ ε}}]", "ms")
    gamma = GammaSM.of([(_bundle("α", "β", "γ", "δ", "ε"), Atom("AGR"))])
    after = dm.fusion_at(before, ("AGR", "T"), gamma)
    ctx.law("golden-fusion").check(lambda: after == expected, got=after, expected=expected)


def fusion_suite(ctx: SuiteContext) -> None:
    law = ctx.law("fusion-diagram")
    for _ in range(ctx.budget):
        op, cherry, gamma = _fusion_instance(ctx)
        ws = _workspace_for(ctx, op, together=cherry)
        result = dm.verify_fusion_diagram(op, cherry, ws, gamma)
        if result.vacuous:
            law.skip()
            continue
        law.check(lambda: result.commutes, operator=op, workspace=ws, top=result.left, bottom=result.right)
    _vacuous_share(ctx, law)
    _golden_fusion(ctx)


def _vacuous_share(ctx: SuiteContext, law: LawResult) -> None:
    samples = law.checked + law.vacuous
    if samples >= 50:
        ctx.law(f"{law.name}-vacuous-share").check(
            lambda: law.vacuous <= 0.2 * samples, vacuous=law.vacuous, samples=samples
        )


# fission


def _fission_instance(ctx: SuiteContext):
    leaves = ctx.rng.randint(1, max(1, ctx.config.verify.assembly_leaves))
    op, gamma = ctx.factory.assembly(leaves, coverage=0.6)
    index = ctx.rng.randrange(leaves)
    alpha = op.skeleton.leaves()[index].label
    source = ctx.factory.morph(ctx.rng.randint(2, 4))
    op = op.replace_arg(index, source)
    gamma = gamma.with_pairs((bundle_at(source), alpha))
    shared, first, second = ctx.factory.partition(bundle_at(source), shared_max=1)
    partner = ctx.factory.atom()
    spec = dm.FissionSpec(ROOT, shared, (first, second), partner)
    pieces = [bundle_at(fission_split(source, part | shared)) for part in (first, second)]
    if ctx.rng.random() < 0.9:
        gamma = gamma.with_pairs((pieces[0], alpha), (pieces[1], partner))
        if ctx.rng.random() < 0.5:
            gamma = gamma.with_pairs((pieces[0], partner), (pieces[1], alpha))
    return op, index, spec, gamma


def _golden_fission(ctx: SuiteContext) -> None:
    source = parse("[T| ASP {α,β,γ,φ @ T| α {β,γ,φ| β {γ,φ| γ φ}}}]", "ms")
    spec = dm.FissionSpec("T", _bundle("φ"), (_bundle("α", "β"), _bundle("γ")), Atom("T"))
    gamma = GammaSM.of([(_bundle("α", "β", "φ"), Atom("T")), (_bundle("γ", "φ"), Atom("T"))])
    result = dm.fission(source, spec, gamma)
    expected = parse_sum("2·[T| ASP [T| {α,β,φ @ T| α {β,φ| β φ}} {γ,φ @ T| γ φ}]]")
    ctx.law("golden-fission").check(lambda: result == expected, got=result, expected=expected)

    s = _parse_mo("{φ,α,β,γ| {φ,α| φ α} {β,γ| β γ}}")
    table = {path: meet for path, _, meet in fission_intersections(s, _bundle("φ", "γ"))}
    ctx.law("golden-intersections").check(
        lambda: table[ROOT] == _bundle("φ", "γ") and sum(1 for meet in table.values() if not meet) == 2,
        tree=s,
    )
    cases = [
        (("φ", "γ"), "{φ,γ| {φ|φ} {γ|γ}}", "{φ,γ| φ γ}"),
        (("φ", "α", "β"), "{φ,α,β| {φ,α| φ α} {β|β}}", "{φ,α,β| {φ,α| φ α} β}"),
    ]
    for target, before, after in cases:
        raw = fission_split(s, _bundle(*target), simplify=False)
        simple = fission_split(s, _bundle(*target))
        ctx.law("golden-split").check(
            lambda: raw == parse(before, "tree") and simple == parse(after, "mo"),
            target=",".join(target),
            raw=raw,
            simplified=simple,
        )


def fission_suite(ctx: SuiteContext) -> None:
    law = ctx.law("fission-diagram")
    for _ in range(ctx.budget):
        op, index, spec, gamma = _fission_instance(ctx)
        ws = _workspace_for(ctx, op, together=(index,))
        result = dm.verify_fission_diagram(op, index, spec, ws, gamma)
        if result.vacuous:
            law.skip()
            continue
        law.check(lambda: result.commutes, operator=op, workspace=ws, top=result.left, bottom=result.right)
    _vacuous_share(ctx, law)
    aligned = ctx.law("aligned-cut-is-root-cut")
    for _ in range(ctx.budget):
        s = ctx.factory.morph(ctx.rng.randint(2, 5))
        first, second = (bundle_at(child) for child in s.children)
        if not first.isdisjoint(second):
            aligned.skip()
            continue
        aligned.check(lambda: dm.fission_cut(s, FeatureBundle(), (first, second)) == root_cut(s), source=s)
    _golden_fission(ctx)


# derived DM operations


def _kt_laws(ctx: SuiteContext) -> None:
    bound = ctx.config.verify.assembly_leaves
    a, b = Atom("a"), Atom("b")
    morph = [t for n in range(1, bound + 1) for t in morph_trees([Feature("f"), Feature("g")], n)]
    bundles = {bundle_at(t) for t in morph}
    gamma = GammaSM.of([(bundle, a) for bundle in bundles] + [(_bundle("f"), b)])
    skeletons = syntactic_trees([a, b], 1) + syntactic_trees([a, b], 2)
    for ws in workspaces(morph, bound):
        for t in skeletons:
            direct = dm.assemble_KT(t, ws, gamma)
            expanded = dm.assemble_KT_expanded(t, ws, gamma)
            ctx.law("kt-equals-sum-mt").check(
                lambda: direct == expanded, skeleton=t, workspace=ws, direct=direct, expanded=expanded
            )


def _motion_laws(ctx: SuiteContext) -> None:
    for _ in range(ctx.budget):
        op, cherry, gamma = _fusion_instance(ctx)
        try:
            rendered, sites = op.render_with_sites(gamma)
            fused = dm.fusion_at(rendered, sites[cherry[0]][:-1], gamma)
        except GammaError:
            ctx.law("fusion-boundary-motion").skip()
            continue
        before, after = len(dm.skeleton_leaves(rendered)), len(dm.skeleton_leaves(fused))
        alpha = subtree(op.skeleton, op.skeleton.leaf_paths()[cherry[0]][:-1]).label
        inserted = insertion_of(subtree(fused, dm.find_leaf(fused, alpha)))
        depth = 1 + max(op.args[k].height for k in cherry)
        ctx.law("fusion-boundary-motion").check(
            lambda: after == before - 1 and inserted.height == depth, before=rendered, after=fused
        )
        ctx.law("reassembly").check(lambda: _reassembles(fused), tree=fused)
        ctx.law("obliteration-preserves").check(lambda: _obliteration_preserves(rendered, sites), tree=rendered)
        ctx.law("semigroup-fusion").check(
            lambda: dm.semigroup_apply([dm.Fuse(sites[cherry[0]][:-1])], op, gamma) == WorkspaceSum.single(fused)
            and dm.semigroup_apply([], op, gamma) == WorkspaceSum.single(rendered)
            and dm.as_operators(WorkspaceSum.single(fused))[0][0] == dm.AssemblyOp.from_tree(fused),
            operator=op,
            alpha=alpha,
        )

    for _ in range(ctx.budget):
        op, index, spec, gamma = _fission_instance(ctx)
        rendered, sites = op.render_with_sites(gamma)
        local = dm.FissionSpec(sites[index], spec.shared, spec.parts, spec.partner)
        source = op.args[index]
        alpha = op.skeleton.leaves()[index].label
        try:
            total = dm.fission(rendered, local, gamma)
        except GammaError:
            ctx.law("fission-boundary-motion").skip()
            continue
        for key, _ in total.items():
            split = key[0][0]
            cherry = dm.find_cherry(split, alpha, spec.partner)
            pieces = [insertion_of(child) for child in subtree(split, cherry).children]
            ctx.law("fission-boundary-motion").check(
                lambda: len(dm.skeleton_leaves(split)) == len(dm.skeleton_leaves(rendered)) + 1
                and all(piece.height <= source.height for piece in pieces),
                before=rendered,
                after=split,
            )
            ctx.law("reassembly").check(lambda: _reassembles(split), tree=split)
            rejoined = dm.fusion_at(split, cherry, gamma.with_pairs((bundle_at(source), alpha)))
            ctx.law("fission-fusion-bundle").check(
                lambda: subtree(rejoined, dm.find_leaf(rejoined, alpha)).label.bundle == bundle_at(source),
                split=split,
                rejoined=rejoined,
            )
        bad = [dm.Fission(local), dm.Obliterate("missing")]
        ctx.law("semigroup-step-errors").check(lambda: _failing_step(bad, op, gamma) == 2, operator=op)


def _obliteration_preserves(ms: Tree, sites: Sequence[Tuple[int, ...]]) -> bool:
    skeleton, args = decompose_ms(ms)
    for k, arg in enumerate(args):
        if arg is None:
            continue
        cleared = dm.obliterate(ms, sites[k])
        new_skeleton, new_args = decompose_ms(cleared)
        expected = list(args)
        expected[k] = None
        if new_skeleton != skeleton or new_args != expected:
            return False
    return True


def _same_outcome(result: dm.PipelineResult, direct: Tree) -> bool:
    return result.assembled == direct and (result.workspace,) in result.sum


def _failing_step(gens: Sequence[dm.Generator], op: dm.AssemblyOp, gamma: GammaSM) -> Optional[int]:
    try:
        dm.semigroup_apply(gens, op, gamma)
    except ScriptError as exc:
        return exc.step
    return None


def _pipeline_laws(ctx: SuiteContext) -> None:
    for _ in range(ctx.budget):
        leaves = ctx.rng.randint(1, max(1, ctx.config.verify.assembly_leaves))
        op, base = ctx.factory.assembly(leaves, coverage=0.6)
        index = ctx.rng.randrange(leaves)
        alpha = op.skeleton.leaves()[index].label
        source = ctx.factory.morph(ctx.rng.randint(2, 4))
        op = op.replace_arg(index, source)
        bundle = bundle_at(source)
        shared, removed, kept = ctx.factory.partition(bundle, shared_max=1)
        survivor = fission_split(source, kept | shared)
        gated = base.with_pairs((bundle, alpha), (bundle_at(survivor), alpha))
        gamma = gated.with_pairs((removed | shared, alpha), (removed, alpha))
        ws = Forest.of(*(arg for arg in op.args if arg is not None))
        rendered, sites = op.render_with_sites(gamma)

        ctx.law("obliteration-pipeline").check(
            lambda: _same_outcome(
                dm.oblit_pipeline(ws, op, index, removed, gamma),
                dm.impoverish_subset(rendered, sites[index], removed, gamma),
            ),
            operator=op,
            removed=removed.text(),
        )
        spec = dm.FissionSpec(index, shared, (removed, kept), alpha)
        local = dm.FissionSpec(sites[index], shared, (removed, kept), alpha)
        ctx.law("impoverishment-pipeline").check(
            lambda: _same_outcome(dm.impov_pipeline(ws, op, index, spec, gamma), dm.impoverish_trace(rendered, local, gamma)),
            operator=op,
            shared=shared.text(),
            removed=removed.text(),
        )
        gated_ms = op.render(gated)
        ctx.law("impoverishment-gamma-gate").check(
            lambda: _rejects(lambda: dm.fission(gated_ms, local, gated), GammaError)
            == _rejects(lambda: dm.impoverish_trace(gated_ms, local, gated), GammaError),
            operator=op,
            shared=shared.text(),
            removed=removed.text(),
        )
    _golden_impoverishment(ctx)


def _golden_impoverishment(ctx: SuiteContext) -> None:
    s = _parse_mo("{φ,α,β,γ,δ| {φ,α| φ α} {β,γ,δ| β {γ,δ| γ δ}}}")
    x = Atom("x")
    cases = [
        (_bundle("φ", "α"), "{β,γ,δ| β {γ,δ| γ δ}}"),
        (_bundle("φ", "γ"), "{α,β,δ| α {β,δ| β δ}}"),
    ]
    for removed, expected in cases:
        kept = _parse_mo(expected)
        gamma = GammaSM.of([(bundle_at(s), x), (bundle_at(kept), x), (removed, x)])
        op = dm.AssemblyOp(Tree.leaf(x), (s,))
        direct = dm.impoverish_subset(op.render(gamma), ROOT, removed, gamma)
        result = dm.oblit_pipeline(Forest.of(s), op, 0, removed, gamma)
        ctx.law("golden-impoverishment").check(
            lambda: insertion_of(direct) == kept and result.assembled == direct,
            removed=removed.text(),
            got=direct,
        )
    gamma = GammaSM.of([(bundle_at(s), x), (_bundle("β", "γ", "δ"), x), (_bundle("φ", "α"), x)])
    spec = dm.FissionSpec(ROOT, FeatureBundle(), (_bundle("β", "γ", "δ"), _bundle("φ", "α")), x)
    trace = insertion_of(dm.impoverish_trace(dm.AssemblyOp(Tree.leaf(x), (s,)).render(gamma), spec, gamma))
    expected = parse("{φ,α,β,γ,δ| {φ,α| φ α}}", "mo")
    ctx.law("golden-trace").check(lambda: trace == expected, got=trace, expected=expected)


def dm_derived_suite(ctx: SuiteContext) -> None:
    _kt_laws(ctx)
    _motion_laws(ctx)
    _pipeline_laws(ctx)


# merge


def merge_suite(ctx: SuiteContext) -> None:
    bound = ctx.config.verify.merge_leaves
    cancellation = ctx.config.copy_cancellation
    atoms = [Atom("a"), Atom("b")]
    trees = [t for n in range(1, bound + 1) for t in syntactic_trees(atoms, n)]
    for ws in workspaces(trees, 3 * bound, max_components=3):
        total = merge_all(ws, cancellation)
        oracle = brute_force_merge_all(ws, cancellation)
        ctx.law("merge-all-oracle").check(lambda: total == oracle, workspace=ws, merge_all=total, oracle=oracle)
        for term, witness, _ in merge_successors(ws, cancellation):
            ctx.law("merge-classification").check(
                lambda: classify_merge(ws, term, witness, cancellation) is not None,
                workspace=ws,
                term=term,
                witness=list(witness),
            )
        for k, component in enumerate(ws):
            for path, node in vertices(component):
                if not path:
                    continue
                moved = internal_merge(ws, k, path, cancellation)
                ctx.law("internal-merge").check(
                    lambda: bool(moved) and all(
                        any(c.arity == 2 and node in c.children for c in key[0]) for key, _ in moved.items()
                    ),
                    workspace=ws,
                    vertex=list(path),
                )
    for _ in range(ctx.budget):
        s = ctx.factory.syntactic(ctx.rng.randint(2, 6))
        h = ctx.factory.head_function(s)
        labels = label_by_head(s, h)
        for v, _ in vertices(s):
            flipped = HeadFunction({
                path: choice if is_prefix(v, path) else _flip(choice) for path, choice in h.choices.items()
            })
            ctx.law("head-label-stability").check(
                lambda: label_by_head(s, flipped)[v] == labels[v], tree=s, vertex=list(v)
            )


def _flip(choice: Projection) -> Projection:
    return Projection.SECOND if choice is Projection.FIRST else Projection.FIRST


SUITES: Dict[str, Callable[[SuiteContext], None]] = {
    "hopf": hopf_suite,
    "comodule": comodule_suite,
    "operad": operad_suite,
    "correspondence": correspondence_suite,
    "fusion": fusion_suite,
    "fission": fission_suite,
    "dm_derived": dm_derived_suite,
    "merge": merge_suite,
}


def run_suite(
    name: str,
    config: ProjectConfig,
    seed: Optional[int] = None,
    budget: Optional[int] = None,
    mutant: Optional[str] = None,
) -> SuiteReport:
    """Run one suite; ``quotient-swap`` uses D wherever Δ^ρ is meant."""
    if name not in SUITES:
        raise ConfigError(f"unknown verification suite {name!r}", {"suites": list(SUITES)})
    if mutant is not None and mutant not in MUTANTS:
        raise ConfigError(f"unknown mutant {mutant!r}", {"mutants": list(MUTANTS)})
    seed = config.verify.seed if seed is None else seed
    budget = config.verify.budget if budget is None else budget
    report = SuiteReport(name, seed, budget, mutant)
    rho = QuotientMode.D if mutant == "quotient-swap" else QuotientMode.RHO
    ctx = SuiteContext(config, random.Random(seed), budget, rho, report)
    logger.info("running suite %s (seed %d, budget %d)", name, seed, budget)
    try:
        SUITES[name](ctx)
    except MsxError as exc:
        report.law("unexpected-error").check(lambda: False, error=f"{exc.code}: {exc}")
    failed = [law.name for law in report.laws if not law.passed]
    if failed:
        logger.warning("suite %s failed: %s", name, ", ".join(failed))
    else:
        logger.info("suite %s passed %d laws", name, len(report.laws))
    return report


def run_suites(names: Sequence[str], config: ProjectConfig, **options: Any) -> List[SuiteReport]:
    return [run_suite(name, config, **options) for name in names]
