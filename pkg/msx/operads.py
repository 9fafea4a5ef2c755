"""The Merge operad, its actions on syntactic and morphosyntactic trees, and the Γ_SM correspondence.

Operad elements are full binary trees whose leaves are numbered holes ``•1 … •n``.
Morphosyntactic trees are plain trees: a syntactic skeleton (unlabelled or
head-labelled binary vertices over atom leaves) in which some leaves have been
replaced by boundary vertices ``{B @ a| …}`` carrying the inserted morphology.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

from .errors import (
    ArityMismatchError,
    ColorMismatchError,
    ConfigError,
    HoleIndexError,
    MatchError,
    StructureError,
)
from .labels import Atom, Boundary, Feature, FeatureBundle, Hole
from .morphology import bundle_at, check_ext
from .syntax import check_syntactic, head_atom
from .trees import ROOT, Tree, VertexId, place_leaves, replace_at, subtree, substitute_leaves, vertices

logger = logging.getLogger(__name__)

SyntacticObject = Tree
MorphObject = Tree
MorphoSynTree = Tree


def hole(index: Optional[int] = None) -> Tree:
    return Tree.leaf(Hole(index))


def unit() -> Tree:
    """1 ∈ ℳ(1)."""
    return hole(1)


def arity(x: Tree) -> int:
    return sum(1 for leaf in x.leaves() if isinstance(leaf.label, Hole))


def _replace_holes(t: Tree, fn: Callable[[Hole], Tree]) -> Tree:
    if t.is_leaf:
        return fn(t.label) if isinstance(t.label, Hole) else t
    return Tree(t.label, tuple(_replace_holes(child, fn) for child in t.children))


def number_holes(x: Tree) -> Tree:
    """Number the holes 1..n in canonical leaf order."""
    counter = iter(range(1, x.leaf_count + 1))
    return _replace_holes(x, lambda _: hole(next(counter)))


def check_operad(x: Tree) -> Tree:
    """Raise unless ``x`` is a full binary tree of holes numbered exactly 1..n."""
    indices = []
    for path, node in vertices(x):
        if node.is_leaf:
            if not isinstance(node.label, Hole) or node.label.index is None:
                raise StructureError(f"leaf at {list(path)} is not a numbered hole", {"path": list(path)})
            indices.append(node.label.index)
        elif node.arity != 2 or node.label is not None:
            raise StructureError(f"vertex at {list(path)} is not an unlabelled binary vertex", {"path": list(path)})
    if sorted(indices) != list(range(1, len(indices) + 1)):
        raise StructureError(f"holes of {x.text} are not numbered 1..{len(indices)}")
    return x


def _check_mixed(x: Tree) -> List[int]:
    indices = sorted(leaf.label.index for leaf in x.leaves() if isinstance(leaf.label, Hole))
    if indices != list(range(1, len(indices) + 1)):
        raise StructureError(f"holes of {x.text} are not numbered 1..{len(indices)}")
    return indices


def _shift(y: Tree, offset: int) -> Tree:
    return _replace_holes(y, lambda h: hole(h.index + offset))


def _check_index(i: int, n: int) -> None:
    if not 1 <= i <= n:
        raise HoleIndexError(f"hole index {i} is outside 1..{n}", {"index": i, "arity": n})


def operad_insert(x: Tree, i: int, y: Tree) -> Tree:
    """x ∘_i y: graft y at hole i; y's holes become i..i+m-1, later holes of x shift by m-1."""
    n, m = arity(check_operad(x)), arity(check_operad(y))
    _check_index(i, n)
    grafted = _shift(y, i - 1)

    def fill(h: Hole) -> Tree:
        if h.index < i:
            return hole(h.index)
        if h.index == i:
            return grafted
        return hole(h.index + m - 1)

    return _replace_holes(x, fill)


def operad_compose(t: Tree, parts: Sequence[Tree]) -> Tree:
    """γ(t; parts): feed part j into hole j, numbering the result's holes part by part."""
    n = arity(check_operad(t))
    if len(parts) != n:
        raise ArityMismatchError(f"{t.text} takes {n} inputs, got {len(parts)}", {"expected": n, "got": len(parts)})
    offsets, running = [], 0
    for part in parts:
        offsets.append(running)
        running += arity(check_operad(part))
    return _replace_holes(t, lambda h: _shift(parts[h.index - 1], offsets[h.index - 1]))


def _check_inputs(t: Tree, args: Sequence[Tree]) -> int:
    n = arity(check_operad(t))
    if len(args) != n:
        raise ArityMismatchError(f"{t.text} takes {n} inputs, got {len(args)}", {"expected": n, "got": len(args)})
    return n


def _check_syntactic_input(position: int, arg: Tree) -> None:
    if any(isinstance(node.label, (FeatureBundle, Feature, Boundary)) for _, node in vertices(arg)):
        raise ColorMismatchError(
            f"input {position} is not a syntactic object: {arg.text}",
            {"input": position},
        )
    check_syntactic(arg, allow_heads=True)


def act_SO(t: Tree, args: Sequence[Tree]) -> Tree:
    """Plug the root of args[j-1] into hole j."""
    _check_inputs(t, args)
    for position, arg in enumerate(args, start=1):
        _check_syntactic_input(position, arg)
    return _replace_holes(t, lambda h: args[h.index - 1])


def act_SO_tracked(t: Tree, args: Sequence[Tree]) -> Tuple[Tree, List[Tuple[int, int]]]:
    """act_SO plus, for every leaf of the result, (input j, leaf k of that input)."""
    act_SO(t, args)
    numbers = [leaf.label.index for leaf in t.leaves()]
    replacements = {k: args[number - 1] for k, number in enumerate(numbers)}
    tracked, origins = substitute_leaves(t, replacements)
    return tracked, [(numbers[k], j) for k, j in origins]


def act_MS(t: Tree, args: Sequence[Tree]) -> Tree:
    """Graft the roots of n morphosyntactic trees onto the holes of t."""
    _check_inputs(t, args)
    for arg in args:
        check_ms(arg)
    return _replace_holes(t, lambda h: args[h.index - 1])


def insert_SO_at_leaf(t: Tree, i: int, s: Tree) -> Tree:
    """t ∘_i s for a syntactic object s: the remaining holes are renumbered 1..n-1."""
    indices = _check_mixed(t)
    _check_index(i, len(indices))
    _check_syntactic_input(i, s)

    def fill(h: Hole) -> Tree:
        if h.index == i:
            return s
        return hole(h.index - 1 if h.index > i else h.index)

    return _replace_holes(t, fill)


@dataclass(frozen=True)
class GammaSM:
    """Admissible (bundle, atom) pairs at a syntax/morphology boundary."""

    pairs: FrozenSet[Tuple[FeatureBundle, Atom]] = field(default_factory=frozenset)
    surjectivity_required: bool = False

    @classmethod
    def of(cls, pairs: Iterable[Tuple[FeatureBundle, Atom]], surjectivity_required: bool = False) -> "GammaSM":
        return cls(frozenset(pairs), surjectivity_required)

    def admits(self, bundle: FeatureBundle, atom: Atom) -> bool:
        return (bundle, atom) in self.pairs

    def atoms_for(self, bundle: FeatureBundle) -> List[Atom]:
        return sorted(atom for b, atom in self.pairs if b == bundle)

    def bundles_for(self, atom: Atom) -> List[FeatureBundle]:
        return sorted((b for b, a in self.pairs if a == atom), key=lambda b: b.text())

    def with_pairs(self, *pairs: Tuple[FeatureBundle, Atom]) -> "GammaSM":
        return GammaSM(self.pairs | frozenset(pairs), self.surjectivity_required)

    def check_surjective(self, atoms: Iterable[str]) -> None:
        if not self.surjectivity_required:
            return
        covered = {atom.name for _, atom in self.pairs}
        missing = sorted(set(atoms) - covered)
        if missing:
            raise ConfigError("gamma_sm does not cover every syntactic atom", {"missing": missing})


def is_boundary(t: Tree) -> bool:
    return isinstance(t.label, Boundary)


def boundary_vertex(s: Tree, atom: Atom) -> Tree:
    """The vertex replacing leaf α_ℓ: S's root relabelled (B_ℓ, α_ℓ)."""
    return Tree(Boundary(bundle_at(s), atom), s.children)


def insertion_of(b: Tree) -> Tree:
    """Recover the morphological tree S_ℓ below a boundary vertex.

    A childless boundary with a single feature reads back as that feature's
    leaf; a one-feature stub and a feature leaf are not told apart.
    """
    bundle = b.label.bundle
    if b.children:
        return Tree(bundle, b.children)
    if len(bundle) == 1:
        return Tree.leaf(next(iter(bundle)))
    return Tree.leaf(bundle)


def boundaries(ms: Tree) -> List[Tuple[VertexId, Tree]]:
    """Boundary vertices of an MS tree, outermost only, in preorder."""
    found = []

    def walk(node: Tree, path: VertexId) -> None:
        if is_boundary(node):
            found.append((path, node))
            return
        for index, child in enumerate(node.children):
            walk(child, path + (index,))

    walk(ms, ROOT)
    return found


def check_ms(t: Tree) -> Tree:
    """Raise unless ``t`` is a syntactic skeleton whose non-atom leaves are valid boundary vertices."""

    def walk(node: Tree, path: VertexId) -> None:
        if is_boundary(node):
            check_ext(insertion_of(node))
            return
        if node.is_leaf:
            if not isinstance(node.label, Atom):
                raise StructureError(f"leaf at {list(path)} is neither an atom nor a boundary", {"path": list(path)})
            return
        if node.arity != 2 or not (node.label is None or isinstance(node.label, Atom)):
            raise StructureError(f"skeleton vertex at {list(path)} is malformed", {"path": list(path)})
        for index, child in enumerate(node.children):
            walk(child, path + (index,))

    walk(t, ROOT)
    return t


def gamma_SO_MO(t: Tree, args: Sequence[Optional[Tree]], gamma_sm: GammaSM) -> Tree:
    """γ_{SO,MO}(T; S_1, …, S_n): insert S_ℓ at leaf ℓ when (B_ℓ, α_ℓ) ∈ Γ_SM.

    Arguments are aligned with ``t.leaves()``; ``None`` is the magma unit and
    leaves that leaf bare.
    """
    return gamma_SO_MO_sites(t, args, gamma_sm)[0]


def gamma_SO_MO_sites(
    t: Tree,
    args: Sequence[Optional[Tree]],
    gamma_sm: GammaSM,
) -> Tuple[Tree, List[VertexId]]:
    """:func:`gamma_SO_MO` plus the VertexId of every skeleton leaf in the result."""
    check_syntactic(t, allow_heads=True)
    leaves = t.leaves()
    if len(args) != len(leaves):
        raise ArityMismatchError(
            f"{t.text} has {len(leaves)} leaves, got {len(args)} morphological arguments",
            {"expected": len(leaves), "got": len(args)},
        )
    replacements: Dict[int, Tree] = {}
    for k, (leaf, arg) in enumerate(zip(leaves, args)):
        if arg is None:
            continue
        check_ext(arg)
        bundle = bundle_at(arg)
        if not gamma_sm.admits(bundle, leaf.label):
            raise MatchError(k + 1, bundle, leaf.label)
        replacements[k] = boundary_vertex(arg, leaf.label)
    result, sites = place_leaves(t, replacements)
    logger.debug("inserted %d morphological trees into %s", len(replacements), t.text)
    return result, sites


def decompose_ms(ms: Tree) -> Tuple[Tree, List[Optional[Tree]]]:
    """Inverse of :func:`gamma_SO_MO`: the head-labelled skeleton and its aligned insertions."""

    def build(node: Tree) -> Tuple[Tree, List[Optional[Tree]]]:
        if is_boundary(node):
            return Tree.leaf(node.label.atom), [insertion_of(node)]
        if node.is_leaf:
            return node, [None]
        parts = [build(child) for child in node.children]
        tree = Tree(node.label, tuple(part[0] for part in parts))
        if len(parts) == 2 and tree.children[0] is not parts[0][0]:
            parts = [parts[1], parts[0]]
        return tree, [arg for part in parts for arg in part[1]]

    return build(check_ms(ms))


def forget_morphology(ms: Tree, keep_heads: bool = False) -> Tree:
    """φ: MS → SO, shrinking every S_ℓ to its root and dropping B_ℓ."""

    def shrink(node: Tree) -> Tree:
        if is_boundary(node):
            return Tree.leaf(node.label.atom)
        if node.is_leaf:
            return node
        label = node.label if keep_heads else None
        return Tree(label, tuple(shrink(child) for child in node.children))

    return shrink(ms)


def verify_correspondence(
    t_op: Tree,
    syn_parts: Sequence[Tree],
    morph_args: Sequence[Sequence[Optional[Tree]]],
    gamma_sm: GammaSM,
) -> bool:
    """Compose-then-insert equals insert-then-act; ``morph_args[j]`` is aligned with ``syn_parts[j].leaves()``."""
    assembled, origins = act_SO_tracked(t_op, syn_parts)
    flat = [morph_args[j - 1][k] for j, k in origins]
    lhs = gamma_SO_MO(assembled, flat, gamma_sm)
    pieces = [gamma_SO_MO(part, args, gamma_sm) for part, args in zip(syn_parts, morph_args)]
    rhs = act_MS(t_op, pieces)
    logger.debug("correspondence for %s: %s vs %s", t_op.text, lhs.text, rhs.text)
    return lhs == rhs


def check_morphism(
    t: Tree,
    args: Sequence[Tree],
    act_source: Callable[[Tree, Sequence[Tree]], Tree],
    act_target: Callable[[Tree, Sequence[Tree]], Tree],
    phi: Callable[[Tree], Tree],
) -> bool:
    """φ(γ_A(t; xs)) == γ_B(t; φ(xs)) for one instance."""
    return phi(act_source(t, args)) == act_target(t, [phi(x) for x in args])


def check_grading(
    t: Tree,
    args: Sequence[Tree],
    act: Callable[[Tree, Sequence[Tree]], Tree],
    grade: Callable[[Tree], int],
) -> bool:
    """Acting on A_{k_1} × … × A_{k_n} lands in A_{k_1+…+k_n}."""
    return grade(act(t, args)) == sum(grade(x) for x in args)


def ms_grade(ms: Tree) -> int:
    return forget_morphology(ms).leaf_count


def verify_exchange_law(x: Tree, y: Tree, z: Tree, i: int, j: int) -> bool:
    """(X ∘_j Y) ∘_i Z against the matching right-hand side of the exchange law."""
    a, b, c = arity(x), arity(y), arity(z)
    lhs = operad_insert(operad_insert(x, j, y), i, z)
    if i < j:
        rhs = operad_insert(operad_insert(x, i, z), j + c - 1, y)
    elif i < j + b:
        rhs = operad_insert(x, j, operad_insert(y, i - j + 1, z))
    else:
        rhs = operad_insert(operad_insert(x, i - b + 1, z), j, y)
    return lhs == rhs


def compose_by_insertions(x: Tree, parts: Sequence[Tree]) -> Tree:
    """γ(X; Y_1, …, Y_n) as (…((X ∘_n Y_n) ∘_{n-1} Y_{n-1}) …) ∘_1 Y_1."""
    result = x
    for index in range(len(parts), 0, -1):
        result = operad_insert(result, index, parts[index - 1])
    return result


def colored_insert_domh(x: Tree, leaf: Union[int, VertexId], y: Tree) -> Tree:
    """Insert a head-labelled object y at an atom leaf of x whose colour matches y's root label.

    Both arguments are in ``[a| …]`` form (see :func:`msx.syntax.annotate_heads`);
    a bare atom leaf ``c`` is the colour unit 1_c.
    """
    check_syntactic(x, allow_heads=True)
    check_syntactic(y, allow_heads=True)
    path = x.leaf_paths()[leaf - 1] if isinstance(leaf, int) else tuple(leaf)
    target = subtree(x, path)
    if not target.is_leaf:
        raise StructureError(f"vertex {list(path)} is not a leaf", {"path": list(path)})
    colour = y.label if y.is_leaf else head_atom(y)
    if colour != target.label:
        raise ColorMismatchError(
            f"root colour {colour} does not match leaf colour {target.label}",
            {"leaf": target.label.text(), "root": colour.text() if colour else None},
        )
    return replace_at(x, path, y)
