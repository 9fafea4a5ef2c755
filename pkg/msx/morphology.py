"""Morphological objects, extended morphological objects and the Δ^ρ comodule structure."""
from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .errors import EmptySplitError, StructureError
from .labels import Boundary, Feature, FeatureBundle, Inventory
from .sums import WorkspaceSum
from .syntax import coproduct
from .trees import ROOT, CopyCancellation, Forest, QuotientMode, Tree, VertexId, is_prefix, is_stub, vertices

logger = logging.getLogger(__name__)

MorphSpec = Union[Feature, str, Tree, Sequence["MorphSpec"]]


def bundle_at(t: Tree) -> FeatureBundle:
    """The bundle carried by a vertex: its label, or the singleton of a feature leaf."""
    label = t.label
    if isinstance(label, Feature):
        return FeatureBundle.of(label)
    if isinstance(label, FeatureBundle):
        return label
    if isinstance(label, Boundary):
        return label.bundle
    raise StructureError(f"vertex {t.text} carries no feature bundle")


def leaf_features(t: Tree) -> FeatureBundle:
    return FeatureBundle.of(*(leaf.label for leaf in t.leaves() if isinstance(leaf.label, Feature)))


def leaf_multiset(t: Tree) -> Counter:
    return Counter(leaf.label for leaf in t.leaves() if isinstance(leaf.label, Feature))


def build_morph(spec: MorphSpec, inventory: Optional[Inventory] = None) -> Tree:
    """Build a morphological object from a nested magma term, labelling vertices by unions."""
    inventory = inventory or Inventory.open()
    if isinstance(spec, Tree):
        return spec
    if isinstance(spec, Feature):
        return Tree.leaf(inventory.check_feature(spec))
    if isinstance(spec, str):
        return Tree.leaf(inventory.parse_feature(spec))
    parts = [build_morph(part, inventory) for part in spec]
    if not parts:
        raise StructureError("a morphological term needs at least one feature")
    if len(parts) == 1:
        return parts[0]
    if len(parts) > 2:
        raise StructureError("morphological terms are binary")
    return Tree.node(*parts, label=bundle_at(parts[0]) | bundle_at(parts[1]))


@dataclass(frozen=True)
class Violation:
    path: VertexId
    condition: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    violations: Tuple[Violation, ...] = ()

    @property
    def is_valid(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.is_valid

    def as_dict(self) -> List[Dict[str, object]]:
        return [{"path": list(v.path), "condition": v.condition, "message": v.message} for v in self.violations]


def _has_nonbranching(t: Tree) -> bool:
    return any(node.arity == 1 or is_stub(node) for _, node in vertices(t))


def validate_ext(t: Tree) -> ValidationReport:
    """Check monotonicity, covering and tightness at every vertex."""
    found: List[Violation] = []
    for path, node in vertices(t):
        if node.is_leaf:
            if not isinstance(node.label, (Feature, FeatureBundle)):
                found.append(Violation(path, "label", f"leaf {node.text} is not a feature"))
            continue
        if not isinstance(node.label, FeatureBundle):
            found.append(Violation(path, "label", f"internal vertex {node.text} has no feature bundle"))
            continue
        bundle = node.label
        for child in node.children:
            if isinstance(child.label, (Feature, FeatureBundle)) and not bundle_at(child) <= bundle:
                found.append(Violation(path, "monotone", f"{bundle_at(child)} is not contained in {bundle}"))
        covered = leaf_features(node)
        if not covered <= bundle:
            found.append(Violation(path, "covering", f"{bundle} does not cover leaf features {covered}"))
        elif covered != bundle and not _has_nonbranching(node):
            found.append(Violation(path, "tightness", f"{bundle} exceeds leaf features {covered}"))
    return ValidationReport(tuple(found))


def check_ext(t: Tree) -> Tree:
    report = validate_ext(t)
    if not report.is_valid:
        raise StructureError(
            f"{t.text} is not an extended morphological object",
            {"violations": report.as_dict()},
        )
    return t


def is_morph_object(t: Tree) -> bool:
    """A full binary, tight morphological tree (no unary vertices or stubs)."""
    return validate_ext(t).is_valid and not _has_nonbranching(t)


def coproduct_rho(ws: Forest, mode: QuotientMode = QuotientMode.RHO) -> WorkspaceSum:
    """Δ^ρ: extracted forest ⊗ quotient keeping the unary vertices and their bundles."""
    return coproduct(ws, mode, CopyCancellation.OFF)


@dataclass(frozen=True)
class ComoduleReport:
    coassociative: bool
    counit: bool
    compatible: bool
    left_closed: bool

    @property
    def passed(self) -> bool:
        return self.coassociative and self.counit and self.compatible and self.left_closed


def comodule_report(sample: Forest, mode: QuotientMode = QuotientMode.RHO) -> ComoduleReport:
    rho = coproduct_rho(sample, mode)
    delta = lambda factor: coproduct_rho(factor, mode)  # noqa: E731
    coassociative = rho.apply_on_factor(0, delta) == rho.apply_on_factor(1, delta)
    unit_right = {key: c for key, c in rho.items() if key[1].is_unit}
    counit = unit_right == {(sample, Forest.unit()): 1}
    rho_left = WorkspaceSum.single(Forest.unit(), sample)
    compatible = rho_left.apply_on_factor(1, delta) == rho.apply_on_factor(
        0, lambda factor: WorkspaceSum.single(Forest.unit(), factor)
    )
    left_closed = all(is_morph_object(c) for key, _ in rho.items() for c in key[0])
    return ComoduleReport(coassociative, counit, compatible, left_closed)


def check_comodule(sample: Forest) -> bool:
    return comodule_report(sample).passed


def simplify_unary(t: Tree) -> Tree:
    """Contract unary vertices that add no feature to their child; idempotent."""
    if t.is_leaf:
        return t
    children = tuple(simplify_unary(child) for child in t.children)
    if len(children) == 1 and _bundle_or_none(children[0]) == t.label:
        return children[0]
    return Tree(t.label, children)


def _bundle_or_none(t: Tree) -> Optional[FeatureBundle]:
    try:
        return bundle_at(t)
    except StructureError:
        return None


def fission_intersections(s: Tree, target: FeatureBundle) -> List[Tuple[VertexId, FeatureBundle, FeatureBundle]]:
    """(w, B_w, B_w ∩ target) for every vertex: the table the split is read from."""
    return [(path, bundle_at(node), bundle_at(node) & target) for path, node in vertices(s)]


def fission_split(s: Tree, target: FeatureBundle, simplify: bool = True) -> Tree:
    """S_{B_i ∪ A}: relabel by intersections with ``target`` and drop the empty branches."""
    root = bundle_at(s)
    if not (root & target):
        raise EmptySplitError(
            f"{target} shares no feature with the root bundle {root}",
            {"target": target.text(), "root": root.text()},
        )
    empty = [path for path, bundle, meet in fission_intersections(s, target) if path and not meet]
    dropped = {path for path in empty if not any(other != path and is_prefix(other, path) for other in empty)}

    def build(node: Tree, path: VertexId) -> Optional[Tree]:
        if path in dropped:
            return None
        if node.is_leaf:
            return node
        kept = [piece for piece in (build(child, path + (k,)) for k, child in enumerate(node.children)) if piece]
        label = bundle_at(node) & target if path else root & target
        return Tree(label, tuple(kept))

    result = build(s, ROOT)
    logger.debug("fission split of %s on %s: %s", s.text, target, result.text)
    return simplify_unary(result) if simplify else result
