"""Elements of forest-presented modules in antichain-unit normal form.

An element is a finite combination of generators.  In normal form the support
is an antichain for the ancestor order and every coefficient is a unit modulo
p, reduced below the order of its generator.  Equality and zero tests go
through the coordinates of the realization, never through the normal form.
"""

from __future__ import annotations

from collections import defaultdict
from functools import cached_property
from typing import Mapping

from .presentation import ForestPresentation, UnknownGenerator

__all__ = ["Element", "PresentationMismatch", "normalize"]


class PresentationMismatch(ValueError):
    pass


def _push_up(forest: ForestPresentation, terms: dict) -> dict:
    """Rules (a) and (b): reduce coefficients and move factors of p to parents."""
    p = forest.p
    while True:
        out: dict = defaultdict(int)
        clean = True
        for g, c in terms.items():
            c %= p ** forest.order_exponent(g)
            while c and c % p == 0:
                clean = False
                c //= p
                g = forest.parent(g)
                if g is None:
                    c = 0
                    break
                c %= p ** forest.order_exponent(g)
            if c:
                if g in out:
                    clean = False
                out[g] += c
        terms = {g: c for g, c in out.items() if c}
        if clean:
            return terms


def normalize(forest: ForestPresentation, raw: Mapping[str, int]) -> dict:
    """Rewrite a generator combination into antichain-unit normal form."""
    terms: dict = defaultdict(int)
    for g, c in raw.items():
        if g not in forest:
            raise UnknownGenerator(g)
        terms[g] += int(c)
    terms = _push_up(forest, terms)
    while True:
        support = sorted(terms)
        move = None
        for s in support:
            below = [t for t in support if forest.is_ancestor(s, t)]
            if below:
                deepest = max(forest.depth(t) for t in below)
                target = min(t for t in below if forest.depth(t) == deepest)
                move = (s, target)
                break
        if move is None:
            return dict(sorted(terms.items()))
        s, t = move
        shift = forest.depth(t) - forest.depth(s)
        terms[t] += terms.pop(s) * forest.p**shift
        terms = _push_up(forest, terms)


class Element:
    __slots__ = ("forest", "terms", "__dict__")

    def __init__(self, forest: ForestPresentation, raw: Mapping[str, int] | None = None):
        self.forest = forest
        self.terms = normalize(forest, raw or {})

    @classmethod
    def generator(cls, forest: ForestPresentation, gid: str) -> "Element":
        return cls(forest, {gid: 1})

    @classmethod
    def from_coords(cls, forest: ForestPresentation, x) -> "Element":
        G = forest.realization
        return cls(forest, G.combination_of(G.reduce(x)))

    @cached_property
    def coords(self) -> tuple:
        return self.forest.realization.coords_of(self.terms)

    def to_coords(self) -> tuple:
        return self.coords

    def _same(self, other: "Element"):
        if not isinstance(other, Element):
            raise TypeError(f"expected Element, got {type(other).__name__}")
        if other.forest is not self.forest:
            raise PresentationMismatch("elements of different presentations")

    def __add__(self, other: "Element") -> "Element":
        self._same(other)
        raw = defaultdict(int, self.terms)
        for g, c in other.terms.items():
            raw[g] += c
        return Element(self.forest, raw)

    def __neg__(self) -> "Element":
        return self.scalar_mul(-1)

    def __sub__(self, other: "Element") -> "Element":
        return self + (-other)

    def scalar_mul(self, c: int) -> "Element":
        return Element(self.forest, {g: c * a for g, a in self.terms.items()})

    def __rmul__(self, c: int) -> "Element":
        if not isinstance(c, int):
            return NotImplemented
        return self.scalar_mul(c)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other) -> bool:
        if not isinstance(other, Element):
            return NotImplemented
        self._same(other)
        return (self - other).is_zero()

    def __hash__(self) -> int:
        return hash(self.coords)

    def __repr__(self) -> str:
        inner = ", ".join(f"{g!r}: {c}" for g, c in self.terms.items())
        return "{" + inner + "}"

    def to_json(self) -> dict:
        return {"terms": dict(self.terms)}
