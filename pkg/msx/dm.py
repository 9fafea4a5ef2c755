"""Assembly of morphosyntactic workspaces and the Distributed Morphology rewrites.

Rewrites act on rendered morphosyntactic trees (see :mod:`msx.operads`). A site
is either a VertexId in that tree, an atom name (a skeleton leaf) or a pair of
atom names (the cherry over those two leaves).
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from itertools import permutations, product
from typing import Callable, Iterable, List, Optional, Sequence, Tuple, Union

from .errors import (
    ArityMismatchError,
    AssemblyError,
    DMError,
    GammaError,
    InvalidVertexError,
    MatchError,
    NoHeadError,
    NoInsertionError,
    NotACherryError,
    NotSubsetError,
    PartitionError,
    ScriptError,
)
from .labels import Atom, Boundary, Feature, FeatureBundle
from .morphology import bundle_at, coproduct_rho, fission_split, simplify_unary
from .operads import (
    GammaSM,
    boundary_vertex,
    decompose_ms,
    gamma_SO_MO,
    gamma_SO_MO_sites,
    insertion_of,
    is_boundary,
)
from .sums import WorkspaceSum
from .syntax import check_syntactic, head_atom
from .trees import (
    ROOT,
    CopyCancellation,
    Forest,
    QuotientMode,
    Tree,
    VertexId,
    matching_terms,
    quotient,
    replace_at,
    subtree,
    vertices,
    workspace_terms,
)

logger = logging.getLogger(__name__)

Site = Union[VertexId, Sequence[int], str, Tuple[str, str]]


def skeleton_leaves(ms: Tree) -> List[Tuple[VertexId, Tree]]:
    """Boundary vertices and bare atom leaves of an MS tree, in preorder."""
    found = []

    def walk(node: Tree, path: VertexId) -> None:
        if is_boundary(node) or node.is_leaf:
            found.append((path, node))
            return
        for index, child in enumerate(node.children):
            walk(child, path + (index,))

    walk(ms, ROOT)
    return found


def _leaf_atom(node: Tree) -> Atom:
    return node.label.atom if is_boundary(node) else node.label


def find_leaf(ms: Tree, atom: Union[str, Atom]) -> VertexId:
    name = atom.name if isinstance(atom, Atom) else atom
    for path, node in skeleton_leaves(ms):
        if _leaf_atom(node).name == name:
            return path
    raise InvalidVertexError(f"no skeleton leaf labelled {name} in {ms.text}", {"atom": name})


def find_cherry(ms: Tree, first: Union[str, Atom], second: Union[str, Atom]) -> VertexId:
    wanted = sorted(a.name if isinstance(a, Atom) else a for a in (first, second))
    leaves = {path for path, _ in skeleton_leaves(ms)}
    for path, node in vertices(ms):
        if node.arity != 2 or is_boundary(node):
            continue
        if all(path + (k,) in leaves for k in (0, 1)):
            if sorted(_leaf_atom(child).name for child in node.children) == wanted:
                return path
    raise InvalidVertexError(f"no cherry over {wanted[0]} and {wanted[1]} in {ms.text}", {"atoms": wanted})


def resolve_leaf(ms: Tree, site: Site) -> VertexId:
    if isinstance(site, (str, Atom)):
        return find_leaf(ms, site)
    return tuple(site)


def resolve_cherry(ms: Tree, site: Site) -> VertexId:
    if isinstance(site, (tuple, list)) and len(site) == 2 and all(isinstance(s, (str, Atom)) for s in site):
        return find_cherry(ms, site[0], site[1])
    return tuple(site)


def _boundary_at(ms: Tree, site: Site) -> Tuple[VertexId, Tree]:
    path = resolve_leaf(ms, site)
    node = subtree(ms, path)
    if not is_boundary(node):
        raise NoInsertionError(f"vertex {list(path)} carries no morphological insertion", {"vertex": list(path)})
    return path, node


def _check_gamma(gamma_sm: GammaSM, bundle: FeatureBundle, atom: Atom) -> None:
    if not gamma_sm.admits(bundle, atom):
        raise GammaError(
            f"({bundle}, {atom}) is not an admissible pair",
            {"bundle": bundle.text(), "atom": atom.text()},
        )


def fusion_at(ms: Tree, site: Site, gamma_sm: GammaSM) -> Tree:
    """Shrink the cherry at ``site`` to one leaf carrying S_12 = {B_1 ∪ B_2 @ α_v| S_1 S_2}."""
    path = resolve_cherry(ms, site)
    node = subtree(ms, path)
    if node.arity != 2 or is_boundary(node) or not all(is_boundary(child) for child in node.children):
        raise NotACherryError(
            f"vertex {list(path)} is not a cherry of two inserted leaves",
            {"vertex": list(path)},
        )
    alpha = head_atom(node)
    if alpha is None:
        raise NoHeadError(f"cherry {list(path)} has no head label", {"vertex": list(path)})
    first, second = node.children
    bundle = first.label.bundle | second.label.bundle
    _check_gamma(gamma_sm, bundle, alpha)
    fused = Tree(Boundary(bundle, alpha), (insertion_of(first), insertion_of(second)))
    return replace_at(ms, path, fused)


def fusion_sites(ms: Tree) -> List[VertexId]:
    return [
        path for path, node in vertices(ms)
        if node.arity == 2 and not is_boundary(node) and all(is_boundary(child) for child in node.children)
    ]


def fusion_all(ms: Tree, gamma_sm: GammaSM) -> WorkspaceSum:
    """ℱ(T): the sum of fusions over every admissible cherry."""
    terms = []
    for path in fusion_sites(ms):
        try:
            terms.append(((Forest.of(fusion_at(ms, path, gamma_sm)),), 1))
        except GammaError:
            logger.debug("cherry %s of %s rejected by gamma_sm", list(path), ms.text)
    return WorkspaceSum.from_terms(terms, arity=1)


def is_morphosyntactic(t: Tree) -> bool:
    return not isinstance(t.label, (Feature, FeatureBundle))


def fusion_workspace(ws: Forest, gamma_sm: GammaSM) -> WorkspaceSum:
    """ℱ(F) = ⊔_i ℱ(T_i) over the morphosyntactic components; morphological components pass through."""
    result = WorkspaceSum.single(Forest.unit())
    for component in ws:
        factor = fusion_all(component, gamma_sm) if is_morphosyntactic(component) else WorkspaceSum.single(component)
        result = result * factor
    return result


@dataclass(frozen=True)
class FissionSpec:
    """Split the insertion at ``leaf`` into B_1 ∪ A and B_2 ∪ A under a new cherry with ``partner``."""

    leaf: Site
    shared: FeatureBundle
    parts: Tuple[FeatureBundle, FeatureBundle]
    partner: Atom


def check_partition(bundle: FeatureBundle, shared: FeatureBundle, parts: Tuple[FeatureBundle, FeatureBundle]) -> None:
    first, second = parts
    details = {"bundle": bundle.text(), "shared": shared.text(), "parts": [first.text(), second.text()]}
    if not shared <= bundle:
        raise PartitionError(f"shared bundle {shared} is not contained in {bundle}", details)
    if not first or not second or not first.isdisjoint(second):
        raise PartitionError(f"{first} and {second} are not disjoint non-empty parts", details)
    if first | second != bundle - shared:
        raise PartitionError(f"{first} and {second} do not partition {bundle - shared}", details)


def fission_term(ms: Tree, spec: FissionSpec, gamma_sm: GammaSM, swap: bool = False) -> Tree:
    """One head assignment of Φ_{A,(B_1,B_2),α}: α_ℓ on the B_1 side, or on the B_2 side when ``swap``."""
    path, node = _boundary_at(ms, spec.leaf)
    bundle, alpha = node.label.bundle, node.label.atom
    check_partition(bundle, spec.shared, spec.parts)
    source = insertion_of(node)
    pieces = [fission_split(source, part | spec.shared) for part in spec.parts]
    atoms = (spec.partner, alpha) if swap else (alpha, spec.partner)
    for piece, atom in zip(pieces, atoms):
        _check_gamma(gamma_sm, bundle_at(piece), atom)
    cherry = Tree(alpha, tuple(boundary_vertex(piece, atom) for piece, atom in zip(pieces, atoms)))
    return replace_at(ms, path, cherry)


def fission(ms: Tree, spec: FissionSpec, gamma_sm: GammaSM) -> WorkspaceSum:
    """Both head assignments, each gated by Γ_SM; equal terms add up."""
    terms, rejected = [], []
    for swap in (False, True):
        try:
            terms.append(((Forest.of(fission_term(ms, spec, gamma_sm, swap)),), 1))
        except GammaError as exc:
            rejected.append(exc)
    if not terms:
        raise rejected[0]
    return WorkspaceSum.from_terms(terms, arity=1)


def fission_over_partners(
    ms: Tree,
    leaf: Site,
    shared: FeatureBundle,
    parts: Tuple[FeatureBundle, FeatureBundle],
    partners: Iterable[Atom],
    gamma_sm: GammaSM,
) -> WorkspaceSum:
    """Σ_β Φ with partner β over ``partners``; a partner Γ_SM rejects on both sides contributes nothing."""
    sums, rejected = [], []
    for partner in partners:
        try:
            sums.append(fission(ms, FissionSpec(leaf, shared, parts, partner), gamma_sm))
        except GammaError as exc:
            rejected.append(exc)
    if rejected and not sums:
        raise rejected[0]
    if not sums:
        raise GammaError("no partner atom is available for the fission", {"parts": [p.text() for p in parts]})
    return WorkspaceSum.total(sums, arity=1)


def obliterate(ms: Tree, site: Site) -> Tree:
    """Replace the insertion at ``site`` by the unit: the leaf keeps its atom, the morphology goes."""
    path, node = _boundary_at(ms, site)
    return replace_at(ms, path, Tree.leaf(node.label.atom))


def with_unmarked_feature(s: Tree, feature: Feature) -> Tree:
    """Record a default feature on a unary vertex above the surviving insertion."""
    return Tree(bundle_at(s) | FeatureBundle.of(feature), (s,))


def impoverish_subset(
    ms: Tree,
    site: Site,
    removed: FeatureBundle,
    gamma_sm: GammaSM,
    unmarked: Optional[Feature] = None,
) -> Tree:
    """Drop the features ``removed`` from the insertion at ``site``, keeping S_{B'} for B' = B_v ∖ B."""
    path, node = _boundary_at(ms, site)
    bundle, alpha = node.label.bundle, node.label.atom
    if not removed or not removed < bundle:
        raise NotSubsetError(f"{removed} is not a non-empty proper subset of {bundle}", {"bundle": bundle.text()})
    kept = fission_split(insertion_of(node), bundle - removed)
    if unmarked is not None:
        kept = with_unmarked_feature(kept, unmarked)
    _check_gamma(gamma_sm, bundle_at(kept), alpha)
    return replace_at(ms, path, boundary_vertex(kept, alpha))


def _split_cherry(node: Tree, spec: FissionSpec, gamma_sm: GammaSM) -> Tree:
    """Φ on a lone boundary vertex: the first admissible head assignment, else the first rejection."""
    local = FissionSpec(ROOT, spec.shared, spec.parts, spec.partner)
    rejected = []
    for swap in (False, True):
        try:
            return fission_term(node, local, gamma_sm, swap)
        except GammaError as exc:
            rejected.append(exc)
    raise rejected[0]


def refuse(node: Tree, spec: FissionSpec, gamma_sm: GammaSM) -> Tree:
    """ℱ_v Φ_{A,(B_1,B_2)}(S_v): fission the boundary vertex ``node``, then fuse the new cherry back."""
    return fusion_at(_split_cherry(node, spec, gamma_sm), ROOT, gamma_sm)


def drop_branch(insertion: Tree, dropped: Tree) -> Tree:
    """insertion /^ρ ``dropped``: the unary vertex with the full bundle stays above the other branch."""
    position = next((k for k, child in enumerate(insertion.children) if child == dropped), None)
    if position is None:
        raise NoInsertionError(f"{dropped.text} is not a branch of {insertion.text}", {"insertion": insertion.text})
    return quotient(insertion, [(position,)], QuotientMode.RHO)


def impoverish_trace(ms: Tree, spec: FissionSpec, gamma_sm: GammaSM) -> Tree:
    """𝕀_{B_v/B} at ``spec.leaf`` with B = parts[0]: ℱ_v Φ(S) /^ρ S_{B∪A}, leaving a unary trace vertex."""
    path, node = _boundary_at(ms, spec.leaf)
    fused = refuse(node, spec, gamma_sm)
    removed = fission_split(insertion_of(node), spec.parts[0] | spec.shared)
    trace = drop_branch(insertion_of(fused), removed)
    return replace_at(ms, path, boundary_vertex(trace, node.label.atom))


@dataclass(frozen=True, eq=False)
class AssemblyOp:
    """𝔐^T_{S_1,…,S_n}: a skeleton T with arguments aligned to ``skeleton.leaves()``; ``None`` is the unit."""

    skeleton: Tree
    args: Tuple[Optional[Tree], ...]

    def __post_init__(self) -> None:
        check_syntactic(self.skeleton, allow_heads=True)
        object.__setattr__(self, "args", tuple(self.args))
        if len(self.args) != self.skeleton.leaf_count:
            raise ArityMismatchError(
                f"{self.skeleton.text} has {self.skeleton.leaf_count} leaves, got {len(self.args)} arguments",
                {"expected": self.skeleton.leaf_count, "got": len(self.args)},
            )

    @classmethod
    def from_tree(cls, ms: Tree) -> "AssemblyOp":
        skeleton, args = decompose_ms(ms)
        return cls(skeleton, tuple(args))

    @property
    def arity(self) -> int:
        return len(self.args)

    @property
    def key(self) -> Tuple[Tree, Tuple[Optional[Tree], ...]]:
        return self.skeleton, tuple(simplify_unary(a) if a is not None else None for a in self.args)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AssemblyOp):
            return NotImplemented
        return self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def inserted(self) -> Forest:
        return Forest.of(*(a for a in self.args if a is not None))

    def render(self, gamma_sm: GammaSM) -> Tree:
        return gamma_SO_MO(self.skeleton, self.args, gamma_sm)

    def render_with_sites(self, gamma_sm: GammaSM) -> Tuple[Tree, List[VertexId]]:
        return gamma_SO_MO_sites(self.skeleton, self.args, gamma_sm)

    def replace_arg(self, index: int, arg: Optional[Tree]) -> "AssemblyOp":
        args = list(self.args)
        args[index] = arg
        return AssemblyOp(self.skeleton, tuple(args))

    def text(self) -> str:
        parts = ", ".join(a.text if a is not None else "1" for a in self.args)
        return f"{self.skeleton.text}; {parts}"

    def __repr__(self) -> str:
        return f"AssemblyOp({self.text()!r})"


def assemble_MT(op: AssemblyOp, ws: Forest, gamma_sm: GammaSM) -> WorkspaceSum:
    """⊔ ∘ (γ_{SO,MO}(T, …) ⊗ id) ∘ δ_{S_1,…,S_n} ∘ Δ^ρ."""
    target = op.inserted()
    rendered = op.render(gamma_sm)
    terms = [
        ((Forest.of(rendered, right),), 1)
        for _, right in matching_terms(ws, target, QuotientMode.RHO)
    ]
    logger.debug("assembly %s on %s: %d matching extractions", op.text(), ws.text, len(terms))
    return WorkspaceSum.from_terms(terms, arity=1)


def assemble_KT(t: Tree, ws: Forest, gamma_sm: GammaSM) -> WorkspaceSum:
    """𝒦_T: insert every Γ_SM-admissible ordering of every n-component extraction."""
    check_syntactic(t, allow_heads=True)
    atoms = [leaf.label for leaf in t.leaves()]
    terms = []
    for left, right in workspace_terms(ws, QuotientMode.RHO, CopyCancellation.OFF):
        if len(left) != len(atoms):
            continue
        for ordering in sorted(set(permutations(left.components)), key=lambda p: tuple(s.sort_key for s in p)):
            if all(gamma_sm.admits(bundle_at(s), atom) for s, atom in zip(ordering, atoms)):
                terms.append(((Forest.of(gamma_SO_MO(t, ordering, gamma_sm), right),), 1))
    return WorkspaceSum.from_terms(terms, arity=1)


def assemble_KT_expanded(t: Tree, ws: Forest, gamma_sm: GammaSM) -> WorkspaceSum:
    """Σ 𝔐^T_{S_1,…,S_n} over admissible tuples of accessible terms: the operator expansion of 𝒦_T."""
    candidates = sorted({node for c in ws for _, node in vertices(c)}, key=lambda s: s.sort_key)
    atoms = [leaf.label for leaf in t.leaves()]
    sums = []
    for args in product(candidates, repeat=len(atoms)):
        if all(gamma_sm.admits(bundle_at(s), atom) for s, atom in zip(args, atoms)):
            sums.append(assemble_MT(AssemblyOp(t, args), ws, gamma_sm))
    return WorkspaceSum.total(sums, arity=1)


def merge_morph(ws: Forest, first: Tree, second: Tree) -> WorkspaceSum:
    """𝔐^{morph}_{S_1,S_2}: extract S_1 ⊔ S_2 by Δ^ρ and merge them under B_1 ∪ B_2."""
    target = Forest.of(first, second)
    merged = Tree.node(first, second, label=bundle_at(first) | bundle_at(second))
    terms = [
        ((Forest.of(merged, right),), 1)
        for _, right in matching_terms(ws, target, QuotientMode.RHO)
    ]
    return WorkspaceSum.from_terms(terms, arity=1)


def fission_cut(s: Tree, shared: FeatureBundle, parts: Tuple[FeatureBundle, FeatureBundle]) -> Forest:
    """ℭ_{A,(B_1,B_2)}(S) = S_{B_1∪A} ⊔ S_{B_2∪A}; the root cut when A = ∅ and the parts follow the root split."""
    check_partition(bundle_at(s), shared, parts)
    return Forest.of(*(fission_split(s, part | shared) for part in parts))


def cut_workspace(ws: Forest, s: Tree, shared: FeatureBundle, parts: Tuple[FeatureBundle, FeatureBundle]) -> WorkspaceSum:
    pieces = fission_cut(s, shared, parts)
    terms = [
        ((Forest.of(pieces, right),), 1)
        for _, right in matching_terms(ws, Forest.of(s), QuotientMode.RHO)
    ]
    return WorkspaceSum.from_terms(terms, arity=1)


def _on_workspaces(total: WorkspaceSum, fn: Callable[[Forest], WorkspaceSum]) -> WorkspaceSum:
    return total.map_terms(lambda key: fn(key[0]))


def _on_ms_component(total: WorkspaceSum, fn: Callable[[Tree], WorkspaceSum]) -> WorkspaceSum:
    """Apply ``fn`` to the single morphosyntactic component of every term."""

    def expand(key: Tuple[Forest, ...]) -> WorkspaceSum:
        ws = key[0]
        index = next(k for k, c in enumerate(ws) if is_morphosyntactic(c))
        rest = ws.without(index)
        return fn(ws[index]) * WorkspaceSum.single(rest)

    return total.map_terms(expand)


@dataclass(frozen=True)
class DiagramCheck:
    commutes: bool
    vacuous: bool
    left: WorkspaceSum
    right: WorkspaceSum


def _diagram(left: WorkspaceSum, right: WorkspaceSum) -> DiagramCheck:
    return DiagramCheck(left == right, not left and not right, left, right)


def verify_fusion_diagram(op: AssemblyOp, cherry: Tuple[int, int], ws: Forest, gamma_sm: GammaSM) -> DiagramCheck:
    """ℱ ∘ 𝔐^T_{S_1,S_2,…} against 𝔐^{T/𝔐(α_1,α_2)}_{S_12,…} ∘ 𝔐^{morph}_{S_1,S_2} on ``ws``.

    ``cherry`` holds the 0-based argument indices of the two fused leaves.
    """
    try:
        rendered, sites = op.render_with_sites(gamma_sm)
    except MatchError as exc:
        logger.debug("fusion diagram: assembly rejected (%s)", exc)
        return _diagram(WorkspaceSum.zero(1), WorkspaceSum.zero(1))
    site = sites[cherry[0]][:-1]
    if sites[cherry[1]][:-1] != site:
        raise NotACherryError("the two arguments do not sit on a cherry", {"arguments": list(cherry)})
    try:
        fused = fusion_at(rendered, site, gamma_sm)
    except GammaError:
        logger.warning("fusion diagram for %s is vacuous: fused bundle rejected", op.text())
        return _diagram(WorkspaceSum.zero(1), WorkspaceSum.zero(1))
    top = _on_ms_component(assemble_MT(op, ws, gamma_sm), lambda _: WorkspaceSum.single(fused))
    fused_op = AssemblyOp.from_tree(fused)
    first, second = op.args[cherry[0]], op.args[cherry[1]]
    bottom = _on_workspaces(merge_morph(ws, first, second), lambda f: assemble_MT(fused_op, f, gamma_sm))
    return _diagram(top, bottom)


def verify_fission_diagram(op: AssemblyOp, index: int, spec: FissionSpec, ws: Forest, gamma_sm: GammaSM) -> DiagramCheck:
    """Φ ∘ 𝔐^T against Σ 𝔐^{T∘_ℓ𝔐(α_ℓ,α)} ∘ ℭ^S_{A,(B_1,B_2)} on ``ws``; ``index`` is the 0-based argument split."""
    try:
        rendered, sites = op.render_with_sites(gamma_sm)
    except MatchError as exc:
        logger.debug("fission diagram: assembly rejected (%s)", exc)
        return _diagram(WorkspaceSum.zero(1), WorkspaceSum.zero(1))
    local = FissionSpec(sites[index], spec.shared, spec.parts, spec.partner)
    try:
        fissioned = fission(rendered, local, gamma_sm)
    except GammaError:
        logger.warning("fission diagram for %s is vacuous: no admissible head assignment", op.text())
        return _diagram(WorkspaceSum.zero(1), WorkspaceSum.zero(1))
    top = _on_ms_component(assemble_MT(op, ws, gamma_sm), lambda _: fissioned)
    cut = cut_workspace(ws, op.args[index], spec.shared, spec.parts)
    bottom = WorkspaceSum.total(
        (coefficient * _on_workspaces(cut, lambda f, t=key[0][0]: assemble_MT(AssemblyOp.from_tree(t), f, gamma_sm))
         for key, coefficient in fissioned.items()),
        arity=1,
    )
    return _diagram(top, bottom)


@dataclass(frozen=True)
class PipelineResult:
    workspace: Forest
    assembled: Tree
    discarded: Tree
    sum: WorkspaceSum


def _remove_components(ws: Forest, trees: Iterable[Tree]) -> Forest:
    components = list(ws)
    for tree in trees:
        if tree not in components:
            raise AssemblyError(f"{tree.text} is not a component of {ws.text}", {"component": tree.text})
        components.remove(tree)
    return Forest.of(*components)


def _argument_vertex(op: AssemblyOp, index: int, gamma_sm: GammaSM) -> Tree:
    if op.args[index] is None:
        raise NoInsertionError(f"argument {index + 1} is the unit", {"argument": index + 1})
    rendered, sites = op.render_with_sites(gamma_sm)
    return _boundary_at(rendered, sites[index])[1]


def _pipeline(
    ws: Forest,
    op: AssemblyOp,
    index: int,
    combined: Tree,
    extracted: Tree,
    inserted: Tree,
    discarded: Tree,
    gamma_sm: GammaSM,
) -> PipelineResult:
    source = op.args[index]
    rest = _remove_components(ws, [source])
    # the rest of the workspace is passed through unchanged, so only the combined tree is cut
    stage = coproduct_rho(Forest.of(combined))
    position = next(k for k, child in enumerate(combined.children) if child == extracted)
    selected = (Forest.of(extracted), Forest.of(quotient(combined, [(position,)], QuotientMode.RHO)))
    if selected not in stage:
        raise AssemblyError(f"{extracted.text} cannot be extracted from {combined.text}")
    split = Forest.of(selected[0], selected[1], rest)
    new_op = op.replace_arg(index, inserted)
    total = assemble_MT(new_op, split, gamma_sm)
    assembled = new_op.render(gamma_sm)
    workspace = Forest.of(assembled, _remove_components(split, new_op.inserted()))
    if (workspace,) not in total:
        raise AssemblyError(f"the assembled workspace {workspace.text} is missing from the assembly sum")
    logger.info("pipeline on %s produced %s", op.text(), assembled.text)
    return PipelineResult(workspace, assembled, discarded, total)


def oblit_pipeline(ws: Forest, op: AssemblyOp, index: int, removed: FeatureBundle, gamma_sm: GammaSM) -> PipelineResult:
    """Impoverish argument ``index`` down to B' = B_v ∖ B by fission, Δ^ρ selection and assembly."""
    node = _argument_vertex(op, index, gamma_sm)
    bundle = node.label.bundle
    if not removed or not removed < bundle:
        raise NotSubsetError(f"{removed} is not a non-empty proper subset of {bundle}", {"bundle": bundle.text()})
    spec = FissionSpec(ROOT, FeatureBundle(), (removed, bundle - removed), node.label.atom)
    pieces = [insertion_of(child) for child in _split_cherry(node, spec, gamma_sm).children]
    kept = next(piece for piece in pieces if bundle_at(piece) == bundle - removed)
    key, _ = merge_morph(Forest.of(*pieces), *pieces).items()[0]
    combined = key[0][0]
    return _pipeline(ws, op, index, combined, kept, kept, drop_branch(combined, kept), gamma_sm)


def impov_pipeline(ws: Forest, op: AssemblyOp, index: int, spec: FissionSpec, gamma_sm: GammaSM) -> PipelineResult:
    """Fission, fuse back, and keep the quotient by S_{B∪A} as the new insertion."""
    node = _argument_vertex(op, index, gamma_sm)
    combined = insertion_of(refuse(node, spec, gamma_sm))
    dropped = fission_split(insertion_of(node), spec.parts[0] | spec.shared)
    return _pipeline(ws, op, index, combined, dropped, drop_branch(combined, dropped), dropped, gamma_sm)


@dataclass(frozen=True)
class Fuse:
    site: Site


@dataclass(frozen=True)
class Fission:
    spec: FissionSpec


@dataclass(frozen=True)
class Impoverish:
    site: Site
    removed: FeatureBundle
    trace: bool = False


@dataclass(frozen=True)
class Obliterate:
    site: Site


Generator = Union[Fuse, Fission, Impoverish, Obliterate]


def apply_generator(gen: Generator, ms: Tree, gamma_sm: GammaSM, unmarked: Optional[Feature] = None) -> WorkspaceSum:
    if isinstance(gen, Fuse):
        return WorkspaceSum.single(fusion_at(ms, gen.site, gamma_sm))
    if isinstance(gen, Fission):
        return fission(ms, gen.spec, gamma_sm)
    if isinstance(gen, Obliterate):
        return WorkspaceSum.single(obliterate(ms, gen.site))
    if isinstance(gen, Impoverish):
        if gen.trace:
            _, node = _boundary_at(ms, gen.site)
            kept = node.label.bundle - gen.removed
            spec = FissionSpec(gen.site, FeatureBundle(), (gen.removed, kept), node.label.atom)
            return WorkspaceSum.single(impoverish_trace(ms, spec, gamma_sm))
        return WorkspaceSum.single(impoverish_subset(ms, gen.site, gen.removed, gamma_sm, unmarked))
    raise TypeError(f"unknown generator {gen!r}")


def semigroup_apply(
    gens: Sequence[Generator],
    op: AssemblyOp,
    gamma_sm: GammaSM,
    unmarked: Optional[Feature] = None,
) -> WorkspaceSum:
    """Apply the generators left to right to 𝔐^T_{S_1,…} (rendered); the empty sequence is the identity."""
    current = WorkspaceSum.single(op.render(gamma_sm))
    for step, gen in enumerate(gens, start=1):
        try:
            current = current.map_terms(lambda key, g=gen: apply_generator(g, key[0][0], gamma_sm, unmarked))
        except (DMError, InvalidVertexError) as exc:
            raise ScriptError(step, exc) from exc
    return current


def as_operators(total: WorkspaceSum) -> List[Tuple[AssemblyOp, object]]:
    """Read a sum of single-tree terms back as assembly operators with coefficients."""
    return [(AssemblyOp.from_tree(key[0][0]), coefficient) for key, coefficient in total.items()]
