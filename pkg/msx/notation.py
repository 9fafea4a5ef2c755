"""Text notation and JSON encoding for trees, workspaces, sums and assembly operators.

Text notation::

    a                      atom leaf (feature leaf inside a bundle body)
    (X Y)                  unlabelled vertex; ``()`` is a bare stub
    [a| X Y]               head-labelled syntactic vertex
    {f,g| X Y}             bundle-labelled morphological vertex; ``{f,g|}`` is a stub
    {f,g @ a| X Y}         boundary vertex; ``{f,g @ a}`` is a boundary leaf
    •  •3                  operad holes, numbered in reading order when bare
    <X>                    trace left by a C-mode quotient
    X ⊔ Y, 1               workspaces, the empty workspace
    2·X ⊗ Y + Z ⊗ 1        sums of tensor terms
    T; S1, 1, S3           assembly operator

Inside morphological context ``(X Y)`` is labelled with the union of its
children's bundles, so ``((φ α)(β γ))`` reads as a morphological object.
"""
from __future__ import annotations

import json
import re
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple, Union

from .dm import AssemblyOp
from .errors import NotationSyntaxError, StructureError
from .labels import Atom, Boundary, Feature, FeatureBundle, Hole, Inventory, Label, Trace, Valuation
from .morphology import bundle_at, check_ext
from .operads import check_ms, check_operad
from .sums import WorkspaceSum
from .syntax import check_syntactic
from .trees import Forest, Tree

Value = Union[Tree, Forest, WorkspaceSum, AssemblyOp]

KINDS = ("tree", "so", "mo", "ms", "operad", "forest", "sum", "assembly")

_PUNCT = "(){}[]|,@;⊔⊗·"
_NAME = re.compile(r"[^\s(){}\[\]|,@;⊔⊗·<>•]+")
_HOLE = re.compile(r"•(\d*)")
_NUMBER = re.compile(r"-?\d+(?:/\d+)?")


class _Parser:
    def __init__(self, text: str, inventory: Inventory) -> None:
        self.text = text
        self.pos = 0
        self.inventory = inventory
        self.numbered_holes = 0
        self.bare_holes = 0

    # scanning

    def _skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> Optional[str]:
        self._skip()
        if self.pos >= len(self.text):
            return None
        char = self.text[self.pos]
        if char in _PUNCT or char in "<•":
            return char
        match = _NAME.match(self.text, self.pos)
        return match.group(0) if match else char

    def take(self, expected: Optional[str] = None) -> str:
        token = self.peek()
        if token is None:
            self.fail(f"unexpected end of input, expected {expected or 'a token'}")
        if expected is not None and token != expected:
            self.fail(f"expected {expected!r}, found {token!r}")
        self.pos += len(token)
        return token

    def name(self) -> str:
        token = self.peek()
        if token is None or token in _PUNCT or token in "<•":
            self.fail(f"expected a name, found {token!r}")
        return self.take()

    def fail(self, message: str) -> None:
        raise NotationSyntaxError(f"{message} at offset {self.pos}", {"offset": self.pos, "text": self.text})

    def at_end(self) -> bool:
        return self.peek() is None

    # trees

    def tree(self, morph: bool = False) -> Tree:
        token = self.peek()
        if token == "(":
            return self._paren(morph)
        if token == "[":
            return self._headed()
        if token == "{":
            return self._braced()
        if token == "•":
            return self._hole()
        if token == "<":
            return self._trace()
        if token is None or token in _PUNCT:
            self.fail(f"expected a tree, found {token!r}")
        name = self.take()
        if morph:
            return Tree.leaf(self.inventory.parse_feature(name))
        return Tree.leaf(self.inventory.parse_atom(name))

    def _children(self, closing: str, morph: bool) -> List[Tree]:
        children = []
        while self.peek() != closing:
            children.append(self.tree(morph))
        self.take(closing)
        return children

    def _paren(self, morph: bool) -> Tree:
        self.take("(")
        children = self._children(")", morph)
        if morph:
            if not children:
                self.fail("an empty morphological vertex needs a bundle: write {f|}")
            return Tree(FeatureBundle.of(*(bundle_at(child) for child in children)), tuple(children))
        return Tree(None, tuple(children))

    def _headed(self) -> Tree:
        self.take("[")
        head = self.inventory.parse_atom(self.name())
        self.take("|")
        return Tree(head, tuple(self._children("]", False)))

    def _braced(self) -> Tree:
        self.take("{")
        features = []
        while self.peek() not in ("|", "@", "}"):
            features.append(self.inventory.parse_feature(self.name()))
            if self.peek() == ",":
                self.take(",")
        bundle = FeatureBundle.of(*features)
        label: Label = bundle
        if self.peek() == "@":
            self.take("@")
            label = Boundary(bundle, self.inventory.parse_atom(self.name()))
        if self.peek() == "}":
            self.take("}")
            if not isinstance(label, Boundary):
                return Tree.leaf(bundle)
            return Tree.leaf(label)
        self.take("|")
        return Tree(label, tuple(self._children("}", True)))

    def _hole(self) -> Tree:
        self._skip()
        match = _HOLE.match(self.text, self.pos)
        self.pos = match.end()
        if match.group(1):
            self.numbered_holes += 1
            return Tree.leaf(Hole(int(match.group(1))))
        self.bare_holes += 1
        return Tree.leaf(Hole(self.bare_holes))

    def _trace(self) -> Tree:
        self._skip()
        start, depth = self.pos, 0
        while self.pos < len(self.text):
            char = self.text[self.pos]
            depth += {"<": 1, ">": -1}.get(char, 0)
            self.pos += 1
            if depth == 0:
                return Tree.leaf(Trace(self.text[start + 1:self.pos - 1]))
        self.fail("unterminated trace")

    def check_holes(self) -> None:
        if self.numbered_holes and self.bare_holes:
            raise StructureError("holes are either all numbered or all bare")

    # workspaces and sums

    def forest(self, morph: bool = False) -> Forest:
        if self.peek() == "1":
            self.take()
            return Forest.unit()
        trees = [self.tree(morph)]
        while self.peek() == "⊔":
            self.take("⊔")
            trees.append(self.tree(morph))
        return Forest.of(*trees)

    def sum(self, morph: bool = False) -> WorkspaceSum:
        if self.peek() == "0":
            self.take()
            return WorkspaceSum.zero()
        terms = [self._term(morph)]
        while self.peek() == "+":
            self.take("+")
            terms.append(self._term(morph))
        arities = {len(key) for key, _ in terms}
        if len(arities) > 1:
            raise StructureError("every term of a sum needs the same number of tensor factors")
        return WorkspaceSum.from_terms(terms)

    def _term(self, morph: bool) -> Tuple[Tuple[Forest, ...], Fraction]:
        coefficient = Fraction(1)
        token = self.peek()
        if token == "-":
            self.take()
            coefficient = Fraction(-1)
        elif token is not None and _NUMBER.fullmatch(token):
            mark = self.pos
            self.take()
            if self.peek() == "·":
                self.take("·")
                coefficient = Fraction(token)
            else:
                self.pos = mark
        factors = [self.forest(morph)]
        while self.peek() == "⊗":
            self.take("⊗")
            factors.append(self.forest(morph))
        return tuple(factors), coefficient

    def assembly(self) -> AssemblyOp:
        skeleton = self.tree()
        self.take(";")
        args: List[Optional[Tree]] = []
        while True:
            if self.peek() == "1":
                self.take()
                args.append(None)
            else:
                args.append(self.tree(morph=True))
            if self.peek() != ",":
                break
            self.take(",")
        return AssemblyOp(skeleton, tuple(args))


def parse(text: str, kind: str = "tree", inventory: Optional[Inventory] = None) -> Value:
    """Parse ``text`` as ``kind`` and validate it; see the module docstring for the notation."""
    if kind not in KINDS:
        raise StructureError(f"unknown value kind {kind!r}", {"kinds": list(KINDS)})
    parser = _Parser(text, inventory or Inventory.open())
    if kind == "forest":
        value: Value = parser.forest()
    elif kind == "sum":
        value = parser.sum()
    elif kind == "assembly":
        value = parser.assembly()
    else:
        value = parser.tree(morph=kind == "mo")
    if not parser.at_end():
        parser.fail(f"unexpected trailing input {parser.peek()!r}")
    parser.check_holes()
    return validate(value, kind)


def validate(value: Value, kind: str) -> Value:
    if kind == "so":
        check_syntactic(value, allow_heads=True)
    elif kind == "mo":
        check_ext(value)
    elif kind == "ms":
        check_ms(value)
    elif kind == "operad":
        check_operad(value)
    return value


def parse_tree(text: str, kind: str = "tree", inventory: Optional[Inventory] = None) -> Tree:
    return parse(text, kind, inventory)


def parse_forest(text: str, inventory: Optional[Inventory] = None) -> Forest:
    return parse(text, "forest", inventory)


def parse_sum(text: str, inventory: Optional[Inventory] = None) -> WorkspaceSum:
    return parse(text, "sum", inventory)


def format_value(value: Value) -> str:
    if isinstance(value, (Tree, Forest)):
        return value.text
    return value.text()


def kind_of(value: Value) -> str:
    if isinstance(value, Tree):
        return "tree"
    if isinstance(value, Forest):
        return "forest"
    if isinstance(value, WorkspaceSum):
        return "sum"
    return "assembly"


# JSON


def label_to_json(label: Label) -> Optional[Dict[str, Any]]:
    if label is None:
        return None
    if isinstance(label, Atom):
        return {"type": "atom", "name": label.name}
    if isinstance(label, Feature):
        return {"type": "feature", "category": label.category, "valuation": label.valuation.value}
    if isinstance(label, FeatureBundle):
        return {"type": "bundle", "features": [label_to_json(f) for f in label]}
    if isinstance(label, Boundary):
        return {"type": "boundary", "bundle": label_to_json(label.bundle), "atom": label.atom.name}
    if isinstance(label, Hole):
        return {"type": "hole", "index": label.index}
    return {"type": "trace", "origin": label.origin}


def label_from_json(data: Optional[Dict[str, Any]]) -> Label:
    if data is None:
        return None
    try:
        kind = data["type"]
        if kind == "atom":
            return Atom(data["name"])
        if kind == "feature":
            return Feature(data["category"], Valuation(data.get("valuation", "")))
        if kind == "bundle":
            return FeatureBundle.of(*(label_from_json(f) for f in data["features"]))
        if kind == "boundary":
            return Boundary(label_from_json(data["bundle"]), Atom(data["atom"]))
        if kind == "hole":
            return Hole(data.get("index"))
        if kind == "trace":
            return Trace(data["origin"])
    except (KeyError, TypeError, ValueError) as exc:
        raise StructureError(f"malformed label {data!r}") from exc
    raise StructureError(f"unknown label type {kind!r}")


def tree_to_json(t: Tree) -> Dict[str, Any]:
    return {"label": label_to_json(t.label), "children": [tree_to_json(c) for c in t.children]}


def tree_from_json(data: Dict[str, Any]) -> Tree:
    if not isinstance(data, dict):
        raise StructureError(f"a tree is a JSON object, got {type(data).__name__}")
    return Tree(label_from_json(data.get("label")), tuple(tree_from_json(c) for c in data.get("children", [])))


def to_json(value: Value) -> Dict[str, Any]:
    if isinstance(value, Tree):
        return {"kind": "tree", "tree": tree_to_json(value)}
    if isinstance(value, Forest):
        return {"kind": "forest", "components": [tree_to_json(c) for c in value]}
    if isinstance(value, WorkspaceSum):
        return {
            "kind": "sum",
            "arity": value.arity,
            "terms": [
                {"coefficient": str(coefficient), "factors": [[tree_to_json(c) for c in f] for f in key]}
                for key, coefficient in value.items()
            ],
        }
    return {
        "kind": "assembly",
        "skeleton": tree_to_json(value.skeleton),
        "args": [tree_to_json(a) if a is not None else None for a in value.args],
    }


def from_json(data: Dict[str, Any]) -> Value:
    kind = data.get("kind") if isinstance(data, dict) else None
    if kind == "tree":
        return tree_from_json(data["tree"])
    if kind == "forest":
        return Forest.of(*(tree_from_json(c) for c in data["components"]))
    if kind == "sum":
        terms = [
            (tuple(Forest.of(*(tree_from_json(c) for c in f)) for f in term["factors"]), Fraction(term["coefficient"]))
            for term in data["terms"]
        ]
        return WorkspaceSum.from_terms(terms, arity=data.get("arity"))
    if kind == "assembly":
        args = tuple(tree_from_json(a) if a is not None else None for a in data["args"])
        return AssemblyOp(tree_from_json(data["skeleton"]), args)
    raise StructureError(f"unknown value kind {kind!r}")


def dumps(value: Value, indent: Optional[int] = 2) -> str:
    return json.dumps(to_json(value), ensure_ascii=False, indent=indent)


def loads(text: str) -> Value:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise NotationSyntaxError(f"invalid JSON: {exc.msg}", {"offset": exc.pos}) from exc
    return from_json(data)
