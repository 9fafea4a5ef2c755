"""Canonical non-planar trees with at most binary branching, and their surgery.

A :class:`Tree` stores its children in canonical order: sorted by
``(size, text, signature)``, so two trees that differ only by child swaps are
the same value. Vertices are addressed by :data:`VertexId` paths of canonical
child indices from the root.
"""
from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from itertools import product
from typing import Any, Callable, Dict, FrozenSet, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from .errors import (
    ArityError,
    EmptyForestError,
    InvalidVertexError,
    LeafCutError,
    OverlapError,
    RootMixError,
    StructureError,
)
from .labels import Atom, Boundary, Feature, FeatureBundle, Hole, Label, Trace, label_code, label_text

logger = logging.getLogger(__name__)

VertexId = Tuple[int, ...]
ROOT: VertexId = ()


class QuotientMode(str, Enum):
    C = "c"
    RHO = "rho"
    D = "d"


class CopyCancellation(str, Enum):
    OFF = "off"
    CANONICAL = "canonical-equality"


_LEAF_ONLY = (Feature, Hole, Trace)


@dataclass(frozen=True, eq=False)
class Tree:
    """A rooted tree; 0, 1 or 2 children, unordered, optionally labelled."""

    label: Label = None
    children: Tuple["Tree", ...] = ()

    def __post_init__(self) -> None:
        children = tuple(self.children)
        if len(children) > 2:
            raise ArityError(f"a vertex has at most two children, got {len(children)}")
        if children and isinstance(self.label, _LEAF_ONLY):
            raise StructureError(f"label {label_text(self.label)!r} may only sit on a leaf")
        if len(children) == 2 and children[1].sort_key < children[0].sort_key:
            children = (children[1], children[0])
        object.__setattr__(self, "children", children)

    @classmethod
    def leaf(cls, label: Label) -> "Tree":
        return cls(label, ())

    @classmethod
    def node(cls, *children: "Tree", label: Label = None) -> "Tree":
        return cls(label, tuple(children))

    @property
    def is_leaf(self) -> bool:
        return not self.children

    @property
    def arity(self) -> int:
        return len(self.children)

    @cached_property
    def text(self) -> str:
        """Canonical encoding, also the text notation of the tree."""
        return _render(self.label, [child.text for child in self.children])

    @cached_property
    def signature(self) -> str:
        return label_code(self.label) + "".join(child.signature for child in self.children)

    @cached_property
    def size(self) -> int:
        return 1 + sum(child.size for child in self.children)

    @cached_property
    def leaf_count(self) -> int:
        if self.is_leaf:
            return 1
        return sum(child.leaf_count for child in self.children)

    @cached_property
    def height(self) -> int:
        if self.is_leaf:
            return 0
        return 1 + max(child.height for child in self.children)

    @property
    def sort_key(self) -> Tuple[int, str, str]:
        return (self.size, self.text, self.signature)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Tree):
            return NotImplemented
        return self is other or (self.text == other.text and self.signature == other.signature)

    def __hash__(self) -> int:
        return hash((self.text, self.signature))

    def __lt__(self, other: "Tree") -> bool:
        return self.sort_key < other.sort_key

    def __str__(self) -> str:
        return self.text

    def __repr__(self) -> str:
        return f"Tree({self.text!r})"

    def leaves(self) -> List["Tree"]:
        return [sub for _, sub in vertices(self) if sub.is_leaf]

    def leaf_paths(self) -> List[VertexId]:
        return [path for path, sub in vertices(self) if sub.is_leaf]


def _render(label: Label, children: Sequence[str]) -> str:
    body = " ".join(children)
    if not children:
        if label is None:
            return "()"
        if isinstance(label, FeatureBundle):
            return "{" + label.text() + "|}"
        if isinstance(label, Boundary):
            return "{" + label.text() + "}"
        return label.text()
    if label is None:
        return f"({body})"
    if isinstance(label, Atom):
        return f"[{label.name}| {body}]"
    return "{" + label.text() + "| " + body + "}"


def canonicalize(t: Tree) -> str:
    return t.text


def is_stub(t: Tree) -> bool:
    """A childless vertex that was internal: unlabelled or bundle-labelled."""
    return t.is_leaf and (t.label is None or isinstance(t.label, FeatureBundle))


def is_prefix(a: VertexId, b: VertexId) -> bool:
    return len(a) <= len(b) and b[: len(a)] == a


def vertices(t: Tree, path: VertexId = ROOT) -> Iterator[Tuple[VertexId, Tree]]:
    yield path, t
    for index, child in enumerate(t.children):
        yield from vertices(child, path + (index,))


def subtree(t: Tree, v: VertexId) -> Tree:
    node = t
    for index in v:
        if index >= len(node.children):
            raise InvalidVertexError(f"no vertex {list(v)} in {t.text}", {"vertex": list(v)})
        node = node.children[index]
    return node


def accessible_terms(t: Tree) -> List[Tuple[VertexId, Tree]]:
    return list(vertices(t))


def nonoverlapping_vertex_sets(t: Tree) -> List[FrozenSet[VertexId]]:
    """Every set of vertices whose subtrees are pairwise disjoint, empty set and {root} included."""
    sets = _nonoverlapping(t, ROOT)
    return sorted(sets, key=lambda chosen: (len(chosen), sorted(chosen)))


def _nonoverlapping(t: Tree, path: VertexId) -> List[FrozenSet[VertexId]]:
    combos: List[FrozenSet[VertexId]] = [frozenset()]
    for index, child in enumerate(t.children):
        below = _nonoverlapping(child, path + (index,))
        combos = [left | right for left in combos for right in below]
    combos.append(frozenset({path}))
    return combos


def _check_extraction(t: Tree, extracted: FrozenSet[VertexId]) -> None:
    for v in extracted:
        subtree(t, v)
    if ROOT in extracted and len(extracted) > 1:
        raise RootMixError("the root can only be extracted on its own")
    ordered = sorted(extracted)
    for i, v in enumerate(ordered):
        for w in ordered[i + 1:]:
            if is_prefix(v, w):
                raise OverlapError(
                    f"vertices {list(v)} and {list(w)} overlap",
                    {"vertices": [list(v), list(w)]},
                )


def quotient(t: Tree, extracted: Iterable[VertexId], mode: QuotientMode) -> Optional[Tree]:
    """T / F_v in one of the three modes; ``None`` is the empty tree (forest unit)."""
    mode = QuotientMode(mode)
    removed = frozenset(tuple(v) for v in extracted)
    _check_extraction(t, removed)
    if removed == {ROOT}:
        return None
    result = _cut(t, ROOT, removed, mode)
    if mode is QuotientMode.D:
        return contract_unary(result) if result is not None else None
    return result


def _cut(t: Tree, path: VertexId, removed: FrozenSet[VertexId], mode: QuotientMode) -> Optional[Tree]:
    if path in removed:
        if mode is QuotientMode.C:
            return Tree.leaf(Trace(t.text))
        return None
    if not any(is_prefix(path, v) for v in removed):
        return t
    kept = []
    for index, child in enumerate(t.children):
        piece = _cut(child, path + (index,), removed, mode)
        if piece is not None:
            kept.append(piece)
    return Tree(t.label, tuple(kept))


def contract_unary(t: Tree) -> Optional[Tree]:
    """Drop stubs and replace every unary vertex by its child; labels of contracted vertices are lost."""
    if t.is_leaf:
        return None if is_stub(t) else t
    kept = [piece for piece in (contract_unary(child) for child in t.children) if piece is not None]
    if not kept:
        return None
    if len(kept) == 1:
        return kept[0]
    return Tree(t.label, tuple(kept))


def replace_at(t: Tree, v: VertexId, new: Tree) -> Tree:
    if not v:
        return new
    index = v[0]
    if index >= len(t.children):
        raise InvalidVertexError(f"no vertex {list(v)} in {t.text}", {"vertex": list(v)})
    children = list(t.children)
    children[index] = replace_at(children[index], v[1:], new)
    return Tree(t.label, tuple(children))


def substitute_leaves(t: Tree, replacements: Mapping[int, Tree]) -> Tuple[Tree, List[Tuple[int, int]]]:
    """Replace leaves (by canonical leaf index) and report where each leaf of the result came from.

    The returned origins are aligned with ``result.leaves()``: ``(k, j)`` means
    the j-th leaf of the replacement for old leaf k (``j == 0`` for kept leaves).
    """
    counter = iter(range(t.leaf_count))

    def build(node: Tree) -> Tuple[Tree, List[Tuple[int, int]]]:
        if node.is_leaf:
            k = next(counter)
            new = replacements.get(k)
            if new is None:
                return node, [(k, 0)]
            return new, [(k, j) for j in range(new.leaf_count)]
        parts = [build(child) for child in node.children]
        tree = Tree(node.label, tuple(part[0] for part in parts))
        if len(parts) == 2 and tree.children[0] is not parts[0][0]:
            parts = [parts[1], parts[0]]
        return tree, [origin for part in parts for origin in part[1]]

    return build(t)


@dataclass(frozen=True, eq=False)
class Forest:
    """A workspace: a multiset of trees, stored in canonical order."""

    components: Tuple[Tree, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "components", tuple(sorted(self.components, key=lambda c: c.sort_key)))

    @classmethod
    def of(cls, *items: Union[Tree, "Forest", None]) -> "Forest":
        collected: List[Tree] = []
        for item in items:
            if item is None:
                continue
            if isinstance(item, Forest):
                collected.extend(item.components)
            else:
                collected.append(item)
        return cls(tuple(collected))

    @classmethod
    def unit(cls) -> "Forest":
        return cls(())

    @property
    def is_unit(self) -> bool:
        return not self.components

    def __or__(self, other: "Forest") -> "Forest":
        return Forest(self.components + other.components)

    def __iter__(self) -> Iterator[Tree]:
        return iter(self.components)

    def __len__(self) -> int:
        return len(self.components)

    def __getitem__(self, index: int) -> Tree:
        return self.components[index]

    @property
    def identity(self) -> Tuple[Tuple[str, str], ...]:
        return tuple((c.text, c.signature) for c in self.components)

    @property
    def sort_key(self) -> Tuple[Any, ...]:
        return (len(self.components), tuple(c.sort_key for c in self.components))

    @property
    def leaf_count(self) -> int:
        return sum(c.leaf_count for c in self.components)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Forest):
            return NotImplemented
        return self.identity == other.identity

    def __hash__(self) -> int:
        return hash(self.identity)

    def count(self, tree: Tree) -> int:
        return sum(1 for c in self.components if c == tree)

    def without(self, index: int) -> "Forest":
        return Forest(self.components[:index] + self.components[index + 1:])

    def replace(self, index: int, *trees: Optional[Tree]) -> "Forest":
        return Forest.of(self.without(index), *trees)

    @property
    def text(self) -> str:
        if not self.components:
            return "1"
        return " ⊔ ".join(c.text for c in self.components)

    def __str__(self) -> str:
        return self.text

    def __repr__(self) -> str:
        return f"Forest({self.text!r})"


def graft(f: Union[Forest, Sequence[Tree]], label: Label = None) -> Tree:
    """The operator B: hang a one- or two-component forest under a new root."""
    components = tuple(f)
    if not components:
        raise EmptyForestError("cannot graft the empty forest")
    if len(components) > 2:
        raise ArityError(f"cannot graft {len(components)} components under a binary root")
    return Tree(label, components)


def root_cut(t: Tree) -> Forest:
    if t.is_leaf:
        raise LeafCutError(f"cannot cut the root of leaf {t.text}")
    return Forest(t.children)


def cancelled_copies(t: Tree, chosen: FrozenSet[VertexId]) -> FrozenSet[VertexId]:
    """Extend an extraction with strictly deeper canonical copies of the extracted terms."""
    if not chosen or ROOT in chosen:
        return chosen
    extracted: Dict[VertexId, Tree] = {v: subtree(t, v) for v in chosen}
    removal = set(chosen)
    for w, tw in vertices(t):
        if w in chosen or any(is_prefix(v, w) or is_prefix(w, v) for v in chosen):
            continue
        if any(len(w) > len(v) and tw == tv for v, tv in extracted.items()):
            removal.add(w)
    return frozenset(w for w in removal if not any(x != w and is_prefix(x, w) for x in removal))


def extractions(
    t: Tree,
    mode: QuotientMode,
    copy_cancellation: CopyCancellation = CopyCancellation.OFF,
) -> List[Tuple[Forest, Forest]]:
    """All (F_v, T/F_v) pairs of one component, one per non-overlapping vertex set."""
    mode, copy_cancellation = QuotientMode(mode), CopyCancellation(copy_cancellation)
    pairs = []
    for chosen in nonoverlapping_vertex_sets(t):
        left = Forest.of(*(subtree(t, v) for v in sorted(chosen)))
        removal = chosen
        if copy_cancellation is CopyCancellation.CANONICAL:
            removal = cancelled_copies(t, chosen)
        pairs.append((left, Forest.of(quotient(t, removal, mode))))
    return pairs


def workspace_terms(
    ws: Forest,
    mode: QuotientMode,
    copy_cancellation: CopyCancellation = CopyCancellation.OFF,
) -> Iterator[Tuple[Forest, Forest]]:
    """Products of per-component extractions: the raw (with repetition) terms of a coproduct."""
    per_component = [extractions(c, mode, copy_cancellation) for c in ws]
    logger.debug("enumerating %s extraction combinations", _product_size(per_component))
    for choice in product(*per_component):
        yield Forest.of(*(left for left, _ in choice)), Forest.of(*(right for _, right in choice))


def _product_size(groups: Sequence[Sequence[Any]]) -> int:
    total = 1
    for group in groups:
        total *= len(group)
    return total


def relabel(t: Tree, fn: Callable[[VertexId, Tree], Label]) -> Tuple[Tree, Dict[VertexId, VertexId]]:
    """Relabel every vertex and report where each old VertexId lands after re-sorting."""

    def build(node: Tree, path: VertexId) -> Tuple[Tree, Dict[VertexId, VertexId]]:
        parts = [build(child, path + (index,)) for index, child in enumerate(node.children)]
        tree = Tree(fn(path, node), tuple(part[0] for part in parts))
        swapped = len(parts) == 2 and tree.children[0] is not parts[0][0]
        moves: Dict[VertexId, VertexId] = {ROOT: ROOT}
        for index, (_, below) in enumerate(parts):
            position = 1 - index if swapped else index
            moves.update({(index,) + old: (position,) + new for old, new in below.items()})
        return tree, moves

    return build(t, ROOT)


def place_leaves(t: Tree, replacements: Mapping[int, Tree]) -> Tuple[Tree, List[VertexId]]:
    """Like :func:`substitute_leaves`, but report the VertexId each old leaf k ends up at."""
    counter = iter(range(t.leaf_count))

    def build(node: Tree) -> Tuple[Tree, Dict[int, VertexId]]:
        if node.is_leaf:
            k = next(counter)
            return replacements.get(k, node), {k: ROOT}
        parts = [build(child) for child in node.children]
        tree = Tree(node.label, tuple(part[0] for part in parts))
        swapped = len(parts) == 2 and tree.children[0] is not parts[0][0]
        sites: Dict[int, VertexId] = {}
        for index, (_, below) in enumerate(parts):
            position = 1 - index if swapped else index
            sites.update({k: (position,) + path for k, path in below.items()})
        return tree, sites

    tree, sites = build(t)
    return tree, [sites[k] for k in range(t.leaf_count)]


def matching_terms(
    ws: Forest,
    target: Forest,
    mode: QuotientMode,
    copy_cancellation: CopyCancellation = CopyCancellation.OFF,
) -> Iterator[Tuple[Forest, Forest]]:
    """The :func:`workspace_terms` whose left channel is exactly ``target``, with repetition."""
    need = Counter(target.components)
    per_component = [
        [(left, right) for left, right in extractions(c, mode, copy_cancellation) if Counter(left.components) <= need]
        for c in ws
    ]
    for choice in product(*per_component):
        left = Forest.of(*(piece for piece, _ in choice))
        if left == target:
            yield left, Forest.of(*(right for _, right in choice))
