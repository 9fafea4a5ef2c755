"""Vertex labels shared by syntactic, morphological, operad and morphosyntactic trees."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import FrozenSet, Iterable, Iterator, Mapping, Optional, Union

from .errors import InventoryError, UnknownFeatureError


class Valuation(str, Enum):
    PLUS = "+"
    MINUS = "-"
    UNVALUED = "u"
    BARE = ""


@dataclass(frozen=True, order=True)
class Atom:
    """A lexical item or syntactic feature drawn from SO_0."""

    name: str

    def text(self) -> str:
        return self.name

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, order=True)
class Feature:
    """A morphological feature: a category with an optional valuation."""

    category: str
    valuation: Valuation = Valuation.BARE

    def text(self) -> str:
        return f"{self.category}{self.valuation.value}"

    def __str__(self) -> str:
        return self.text()


@dataclass(frozen=True)
class FeatureBundle:
    """A finite set of features; union, not disjoint union."""

    features: FrozenSet[Feature] = field(default_factory=frozenset)

    @classmethod
    def of(cls, *features: Union[Feature, "FeatureBundle"]) -> "FeatureBundle":
        collected = set()
        for item in features:
            if isinstance(item, FeatureBundle):
                collected.update(item.features)
            else:
                collected.add(item)
        return cls(frozenset(collected))

    def __iter__(self) -> Iterator[Feature]:
        return iter(sorted(self.features))

    def __len__(self) -> int:
        return len(self.features)

    def __bool__(self) -> bool:
        return bool(self.features)

    def __contains__(self, item: object) -> bool:
        return item in self.features

    def __or__(self, other: "FeatureBundle") -> "FeatureBundle":
        return FeatureBundle(self.features | other.features)

    def __and__(self, other: "FeatureBundle") -> "FeatureBundle":
        return FeatureBundle(self.features & other.features)

    def __sub__(self, other: "FeatureBundle") -> "FeatureBundle":
        return FeatureBundle(self.features - other.features)

    def __le__(self, other: "FeatureBundle") -> bool:
        return self.features <= other.features

    def __lt__(self, other: "FeatureBundle") -> bool:
        return self.features < other.features

    def isdisjoint(self, other: "FeatureBundle") -> bool:
        return self.features.isdisjoint(other.features)

    def text(self) -> str:
        return ",".join(feature.text() for feature in self)

    def __str__(self) -> str:
        return "{" + self.text() + "}"


EMPTY_BUNDLE = FeatureBundle()


@dataclass(frozen=True)
class Boundary:
    """The (B_l, alpha_l) pair carried by a syntax/morphology boundary vertex."""

    bundle: FeatureBundle
    atom: Atom

    def text(self) -> str:
        return f"{self.bundle.text()} @ {self.atom.text()}"


@dataclass(frozen=True)
class Hole:
    """An operad input; numbered 1..n inside a well-formed operad element."""

    index: Optional[int] = None

    def text(self) -> str:
        return "•" if self.index is None else f"•{self.index}"


@dataclass(frozen=True)
class Trace:
    """Leaf left behind by a C-mode quotient; stores the removed subtree's encoding."""

    origin: str

    def text(self) -> str:
        return f"<{self.origin}>"


Label = Union[None, Atom, Feature, FeatureBundle, Boundary, Hole, Trace]

_KIND_CODES = {
    type(None): "n",
    Atom: "a",
    Feature: "f",
    FeatureBundle: "b",
    Boundary: "p",
    Hole: "h",
    Trace: "t",
}


def label_code(label: Label) -> str:
    return _KIND_CODES[type(label)]


def label_text(label: Label) -> str:
    if label is None:
        return ""
    return label.text()


@dataclass(frozen=True)
class Inventory:
    """SO_0 atoms and MO_0 categories; an empty collection means an open inventory."""

    atoms: FrozenSet[str] = frozenset()
    categories: Mapping[str, FrozenSet[Valuation]] = field(default_factory=dict)

    @classmethod
    def open(cls) -> "Inventory":
        return cls()

    def check_atom(self, atom: Atom) -> Atom:
        if self.atoms and atom.name not in self.atoms:
            raise InventoryError(f"atom {atom.name!r} is not in SO_0", {"atom": atom.name})
        return atom

    def check_feature(self, feature: Feature) -> Feature:
        if not self.categories:
            return feature
        allowed = self.categories.get(feature.category)
        if allowed is None or feature.valuation not in allowed:
            raise UnknownFeatureError(
                f"feature {feature.text()!r} is not in MO_0",
                {"feature": feature.text()},
            )
        return feature

    def check_bundle(self, bundle: FeatureBundle) -> FeatureBundle:
        for feature in bundle:
            self.check_feature(feature)
        return bundle

    def parse_feature(self, text: str) -> Feature:
        """Read ``cat+``, ``cat-``, ``catu`` or a bare ``cat``.

        A trailing ``u`` is an unvalued marker only when the inventory knows the
        stem as a category admitting the unvalued form.
        """
        if len(text) > 1 and text[-1] in "+-":
            feature = Feature(text[:-1], Valuation(text[-1]))
        elif (
            len(text) > 1
            and text.endswith("u")
            and text not in self.categories
            and Valuation.UNVALUED in self.categories.get(text[:-1], ())
        ):
            feature = Feature(text[:-1], Valuation.UNVALUED)
        else:
            feature = Feature(text)
        return self.check_feature(feature)

    def parse_atom(self, text: str) -> Atom:
        return self.check_atom(Atom(text))


def bundle_of(items: Iterable[Union[str, Feature]], inventory: Optional[Inventory] = None) -> FeatureBundle:
    inventory = inventory or Inventory.open()
    return FeatureBundle.of(*(
        item if isinstance(item, Feature) else inventory.parse_feature(item) for item in items
    ))
