"""Syntactic objects, the workspace coproduct, Merge and head functions."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from itertools import product
from typing import Dict, List, Mapping, Optional, Tuple

from .errors import NotASuccessorError, PartialHeadError, StructureError
from .labels import Atom
from .sums import WorkspaceSum
from .trees import (
    ROOT,
    CopyCancellation,
    Forest,
    QuotientMode,
    Tree,
    VertexId,
    cancelled_copies,
    is_prefix,
    matching_terms,
    quotient,
    relabel,
    subtree,
    vertices,
    workspace_terms,
)

logger = logging.getLogger(__name__)


def check_syntactic(t: Tree, allow_heads: bool = False) -> Tree:
    """Raise StructureError unless ``t`` is a full binary tree with atom leaves."""
    for path, node in vertices(t):
        if node.is_leaf:
            if not isinstance(node.label, Atom):
                raise StructureError(f"leaf at {list(path)} is not a syntactic atom", {"path": list(path)})
        elif node.arity != 2:
            raise StructureError(f"vertex at {list(path)} is not binary", {"path": list(path)})
        elif node.label is not None and not (allow_heads and isinstance(node.label, Atom)):
            raise StructureError(f"internal vertex at {list(path)} carries a label", {"path": list(path)})
    return t


def is_syntactic(t: Tree, allow_heads: bool = False) -> bool:
    try:
        check_syntactic(t, allow_heads)
    except StructureError:
        return False
    return True


def magma_merge(s1: Tree, s2: Tree) -> Tree:
    return Tree.node(s1, s2)


def coproduct(
    ws: Forest,
    mode: QuotientMode,
    copy_cancellation: CopyCancellation = CopyCancellation.OFF,
) -> WorkspaceSum:
    """Δ on a workspace: multiplicative over components, left channel ⊗ right channel."""
    terms = WorkspaceSum.from_terms(
        (((left, right), 1) for left, right in workspace_terms(ws, mode, copy_cancellation)),
        arity=2,
    )
    logger.debug("coproduct of %s: %d distinct terms", ws.text, len(terms))
    return terms


def coproduct_syn(
    ws: Forest,
    mode: QuotientMode = QuotientMode.D,
    copy_cancellation: CopyCancellation = CopyCancellation.CANONICAL,
) -> WorkspaceSum:
    return coproduct(ws, mode, copy_cancellation)


def merge_pair(
    ws: Forest,
    s1: Tree,
    s2: Optional[Tree],
    copy_cancellation: CopyCancellation = CopyCancellation.CANONICAL,
) -> WorkspaceSum:
    """⊔ ∘ (B ⊗ id) ∘ δ_{S,S'} ∘ Δ; ``s2=None`` is the magma unit 1."""
    target = Forest.of(s1, s2)
    merged = magma_merge(s1, s2) if s2 is not None else s1
    terms = [
        ((Forest.of(merged, right),), 1)
        for _, right in matching_terms(ws, target, QuotientMode.D, copy_cancellation)
    ]
    return WorkspaceSum.from_terms(terms, arity=1)


def merge_all(ws: Forest, copy_cancellation: CopyCancellation = CopyCancellation.CANONICAL) -> WorkspaceSum:
    """𝒦 = ⊔ ∘ (B ⊗ id) ∘ Π_(2) ∘ Δ, summed over ordered pairs (S, S')."""
    terms = []
    for term, _, weight in merge_successors(ws, copy_cancellation):
        terms.append(((term,), weight))
    return WorkspaceSum.from_terms(terms, arity=1)


def merge_successors(
    ws: Forest,
    copy_cancellation: CopyCancellation = CopyCancellation.CANONICAL,
) -> List[Tuple[Forest, Tuple[Tree, Tree], int]]:
    """Every Π_(2) successor with its witness pair and ordered-pair weight."""
    successors = []
    for left, right in workspace_terms(ws, QuotientMode.D, copy_cancellation):
        if len(left) != 2:
            continue
        first, second = left.components
        weight = 1 if first == second else 2
        successors.append((Forest.of(magma_merge(first, second), right), (first, second), weight))
    return successors


def internal_merge(
    ws: Forest,
    component: int,
    vertex: VertexId,
    copy_cancellation: CopyCancellation = CopyCancellation.CANONICAL,
) -> WorkspaceSum:
    """IM of T_v with the remainder T/T_v, as the composite 𝔐_{S,T/S} ∘ 𝔐_{S,1}."""
    tree = ws[component]
    if not vertex:
        raise NotASuccessorError("internal merge needs a proper accessible term")
    moved = subtree(tree, vertex)
    remainder = _remainder(tree, frozenset({tuple(vertex)}), copy_cancellation)
    extracted = merge_pair(ws, moved, None, copy_cancellation)
    return WorkspaceSum.total(
        merge_pair(key[0], moved, remainder, copy_cancellation) for key, _ in extracted.items()
    )


class MergeKind(str, Enum):
    EM = "EM"
    IM = "IM"
    SM_A = "SM_a"
    SM_B = "SM_b"
    SM_C = "SM_c"


def _remainder(
    tree: Tree,
    chosen: frozenset,
    copy_cancellation: CopyCancellation = CopyCancellation.CANONICAL,
) -> Optional[Tree]:
    removal = chosen
    if CopyCancellation(copy_cancellation) is CopyCancellation.CANONICAL:
        removal = cancelled_copies(tree, chosen)
    return quotient(tree, removal, QuotientMode.D)


def _proper_occurrences(tree: Tree, target: Tree) -> List[VertexId]:
    return [path for path, node in vertices(tree) if path and node == target]


def classify_merge(
    before: Forest,
    term: Forest,
    witness: Tuple[Tree, Tree],
    copy_cancellation: CopyCancellation = CopyCancellation.CANONICAL,
) -> MergeKind:
    """Name the Merge case that turns ``before`` into ``term`` with witnesses (S, S')."""
    s, s_prime = witness
    merged = magma_merge(s, s_prime)
    components = list(before)
    indices = range(len(components))

    def rest(*dropped: int) -> List[Tree]:
        return [c for k, c in enumerate(components) if k not in dropped]

    def matches(*pieces: Optional[Tree]) -> bool:
        return term == Forest.of(merged, *pieces)

    for i, j in product(indices, indices):
        if i != j and components[i] == s and components[j] == s_prime and matches(*rest(i, j)):
            return MergeKind.EM

    for i in indices:
        for v in _proper_occurrences(components[i], s):
            remainder = _remainder(components[i], frozenset({v}), copy_cancellation)
            if remainder is not None and remainder == s_prime and matches(*rest(i)):
                return MergeKind.IM

    for first, second in ((s, s_prime), (s_prime, s)):
        for i, j in product(indices, indices):
            if i == j or components[j] != second:
                continue
            for v in _proper_occurrences(components[i], first):
                if matches(_remainder(components[i], frozenset({v}), copy_cancellation), *rest(i, j)):
                    return MergeKind.SM_A

    for i in indices:
        for v in _proper_occurrences(components[i], s):
            for w in _proper_occurrences(components[i], s_prime):
                if is_prefix(v, w) or is_prefix(w, v):
                    continue
                if matches(_remainder(components[i], frozenset({v, w}), copy_cancellation), *rest(i)):
                    return MergeKind.SM_B

    for i, j in product(indices, indices):
        if i == j:
            continue
        for v in _proper_occurrences(components[i], s):
            for w in _proper_occurrences(components[j], s_prime):
                if matches(
                    _remainder(components[i], frozenset({v}), copy_cancellation),
                    _remainder(components[j], frozenset({w}), copy_cancellation),
                    *rest(i, j),
                ):
                    return MergeKind.SM_C

    raise NotASuccessorError(
        f"{term.text} is not obtained from {before.text} by merging {s.text} with {s_prime.text}",
        {"before": before.text, "term": term.text},
    )


class Projection(str, Enum):
    """Which canonical child projects its head to the parent."""

    FIRST = "first"
    SECOND = "second"

    @property
    def index(self) -> int:
        return 0 if self is Projection.FIRST else 1


@dataclass(frozen=True)
class HeadFunction:
    choices: Mapping[VertexId, Projection] = field(default_factory=dict)

    @classmethod
    def uniform(cls, tree: Tree, projection: Projection) -> "HeadFunction":
        return cls({path: projection for path, node in vertices(tree) if not node.is_leaf})

    @classmethod
    def toward(cls, tree: Tree, leaf: VertexId, default: Projection = Projection.FIRST) -> "HeadFunction":
        """Project along the path to ``leaf``; elsewhere use ``default``."""
        choices = {}
        for path, node in vertices(tree):
            if node.is_leaf:
                continue
            if is_prefix(path, leaf) and len(leaf) > len(path):
                choices[path] = Projection.FIRST if leaf[len(path)] == 0 else Projection.SECOND
            else:
                choices[path] = default
        return cls(choices)

    def projection(self, path: VertexId) -> Projection:
        try:
            return self.choices[path]
        except KeyError:
            raise PartialHeadError(f"no head choice at vertex {list(path)}", {"vertex": list(path)}) from None

    def head_leaf(self, tree: Tree, v: VertexId = ROOT) -> VertexId:
        path = tuple(v)
        node = subtree(tree, path)
        while not node.is_leaf:
            index = self.projection(path).index if node.arity == 2 else 0
            path = path + (index,)
            node = node.children[index]
        return path


def label_by_head(s: Tree, h: HeadFunction) -> Dict[VertexId, Atom]:
    """α_v for every vertex: the atom at the leaf reached by following projecting children."""
    labels: Dict[VertexId, Atom] = {}
    for path, node in vertices(s):
        leaf = h.head_leaf(s, path) if not node.is_leaf else path
        labels[path] = subtree(s, leaf).label
    return labels


def annotate_heads(s: Tree, h: HeadFunction) -> Tree:
    """Write α_v onto every internal vertex, giving the ``[a| X Y]`` form."""
    labels = label_by_head(s, h)
    annotated, _ = relabel(s, lambda path, node: node.label if node.is_leaf else labels[path])
    return annotated


def head_atom(t: Tree) -> Optional[Atom]:
    return t.label if isinstance(t.label, Atom) else None


def strip_heads(t: Tree) -> Tuple[Tree, Optional[HeadFunction]]:
    """Inverse of :func:`annotate_heads`; returns ``None`` when no vertex is annotated."""
    internal = [(path, node) for path, node in vertices(t) if not node.is_leaf]
    labelled = [path for path, node in internal if isinstance(node.label, Atom)]
    stripped, moves = relabel(t, lambda path, node: node.label if node.is_leaf else None)
    if not labelled:
        return stripped, None
    if len(labelled) != len(internal):
        missing = [list(path) for path, node in internal if not isinstance(node.label, Atom)]
        raise PartialHeadError("head annotation is missing on some vertices", {"vertices": missing})
    choices: Dict[VertexId, Projection] = {}
    for path, node in internal:
        projecting = next(
            (k for k, child in enumerate(node.children) if head_atom(child) == node.label),
            None,
        )
        if projecting is None:
            raise PartialHeadError(
                f"vertex {list(path)} is labelled {node.label} but no child carries that head",
                {"vertex": list(path)},
            )
        new_child = moves[path + (projecting,)]
        choices[moves[path]] = Projection.FIRST if new_child[-1] == 0 else Projection.SECOND
    return stripped, HeadFunction(choices)


def brute_force_merge_all(ws: Forest, copy_cancellation: CopyCancellation = CopyCancellation.CANONICAL) -> WorkspaceSum:
    """Σ_{S,S'} merge_pair(ws, S, S') over all accessible terms; the oracle for merge_all."""
    candidates = sorted({node for c in ws for _, node in vertices(c)}, key=lambda t: t.sort_key)
    return WorkspaceSum.total(
        (merge_pair(ws, s, s_prime, copy_cancellation) for s, s_prime in product(candidates, candidates)),
        arity=1,
    )

