"""Formal rational linear combinations of workspaces and workspace tensors."""
from __future__ import annotations

from fractions import Fraction
from typing import Callable, Dict, Iterable, Iterator, List, Optional, Tuple, Union

from .trees import Forest, Tree

Key = Tuple[Forest, ...]
Scalar = Union[int, Fraction]


class WorkspaceSum:
    """A finite sum of tensor terms F_1 ⊗ … ⊗ F_k with rational coefficients.

    Every key has the same number of tensor factors (the sum's arity); a plain
    workspace sum has arity 1. Zero coefficients are never stored.
    """

    def __init__(self, terms: Optional[Dict[Key, Scalar]] = None, arity: Optional[int] = None) -> None:
        self._terms: Dict[Key, Fraction] = {}
        self.arity = arity
        for key, coefficient in (terms or {}).items():
            self._accumulate(key, Fraction(coefficient))

    def _accumulate(self, key: Key, coefficient: Fraction) -> None:
        if self.arity is None:
            self.arity = len(key)
        elif len(key) != self.arity:
            raise ValueError(f"mixed tensor arity {len(key)} in a sum of arity {self.arity}")
        total = self._terms.get(key, Fraction(0)) + coefficient
        if total:
            self._terms[key] = total
        else:
            self._terms.pop(key, None)

    @classmethod
    def zero(cls, arity: Optional[int] = None) -> "WorkspaceSum":
        return cls(arity=arity)

    @classmethod
    def single(cls, *factors: Union[Forest, Tree, None], coefficient: Scalar = 1) -> "WorkspaceSum":
        key = tuple(_as_forest(factor) for factor in factors)
        return cls({key: coefficient})

    @classmethod
    def from_terms(cls, terms: Iterable[Tuple[Key, Scalar]], arity: Optional[int] = None) -> "WorkspaceSum":
        result = cls(arity=arity)
        for key, coefficient in terms:
            result._accumulate(tuple(key), Fraction(coefficient))
        return result

    @classmethod
    def total(cls, sums: Iterable["WorkspaceSum"], arity: Optional[int] = None) -> "WorkspaceSum":
        result = cls(arity=arity)
        for item in sums:
            for key, coefficient in item.items():
                result._accumulate(key, coefficient)
        return result

    def items(self) -> List[Tuple[Key, Fraction]]:
        return sorted(self._terms.items(), key=lambda pair: tuple(f.sort_key for f in pair[0]))

    def __iter__(self) -> Iterator[Tuple[Key, Fraction]]:
        return iter(self.items())

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __contains__(self, key: object) -> bool:
        return key in self._terms

    def coefficient(self, *factors: Union[Forest, Tree, None]) -> Fraction:
        return self._terms.get(tuple(_as_forest(factor) for factor in factors), Fraction(0))

    def support(self) -> frozenset:
        return frozenset(self._terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WorkspaceSum):
            return NotImplemented
        return self._terms == other._terms

    def __add__(self, other: "WorkspaceSum") -> "WorkspaceSum":
        return WorkspaceSum.total([self, other], arity=self.arity or other.arity)

    def __rmul__(self, alpha: Scalar) -> "WorkspaceSum":
        return WorkspaceSum.from_terms(((k, alpha * v) for k, v in self._terms.items()), arity=self.arity)

    def __sub__(self, other: "WorkspaceSum") -> "WorkspaceSum":
        return self + (-1) * other

    def __neg__(self) -> "WorkspaceSum":
        return (-1) * self

    def __mul__(self, other: "WorkspaceSum") -> "WorkspaceSum":
        """Product in the tensor power of the workspace algebra: ⊔ factor by factor."""
        result = WorkspaceSum(arity=self.arity or other.arity)
        for left_key, left_coefficient in self._terms.items():
            for right_key, right_coefficient in other._terms.items():
                key = tuple(a | b for a, b in zip(left_key, right_key))
                result._accumulate(key, left_coefficient * right_coefficient)
        return result

    def map_terms(self, fn: Callable[[Key], "WorkspaceSum"]) -> "WorkspaceSum":
        """Extend ``fn`` linearly from basis terms to the whole sum."""
        result = WorkspaceSum()
        for key, coefficient in self._terms.items():
            for image_key, image_coefficient in fn(key).items():
                result._accumulate(image_key, coefficient * image_coefficient)
        return result

    def apply_on_factor(self, index: int, fn: Callable[[Forest], "WorkspaceSum"]) -> "WorkspaceSum":
        """Apply a linear map to one tensor factor, splicing its output factors in place."""

        def expand(key: Key) -> "WorkspaceSum":
            image = fn(key[index])
            return WorkspaceSum.from_terms(
                (key[:index] + image_key + key[index + 1:], coefficient)
                for image_key, coefficient in image.items()
            )

        return self.map_terms(expand)

    def collapse(self) -> "WorkspaceSum":
        """Join all tensor factors with ⊔: the ⊔ step of the Merge and assembly composites."""
        return WorkspaceSum.from_terms(
            ((Forest.of(*key),), coefficient) for key, coefficient in self._terms.items()
        )

    def text(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for key, coefficient in self.items():
            body = " ⊗ ".join(factor.text for factor in key)
            if coefficient == 1:
                parts.append(body)
            elif coefficient == -1:
                parts.append(f"-{body}")
            else:
                parts.append(f"{coefficient}·{body}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"WorkspaceSum({self.text()!r})"


def _as_forest(factor: Union[Forest, Tree, None]) -> Forest:
    if isinstance(factor, Forest):
        return factor
    return Forest.of(factor)
