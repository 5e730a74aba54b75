"""Finite abelian p-groups with explicit coordinates, and their subgroups.

A :class:`FiniteModule` is ``Z/p^e_1 + ... + Z/p^e_r`` with ``e_1 >= ... >= e_r``.
When it comes from a forest presentation it also carries the translation
between generator combinations and coordinates, computed from the Smith form
of the relation matrix.

Subgroups are stored in *scaled* coordinates: coordinate ``i`` is multiplied
by ``p^(E - e_i)`` with ``E = max e_i``, embedding the module in ``(Z/p^E)^r``.
There every subgroup has a canonical Howell basis, which makes membership,
equality and hashing exact.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Sequence

from .linalg import howell_form, pivot_column, reduce_by_howell, smith_form, valuation

__all__ = [
    "AmbientMismatch",
    "TooLarge",
    "FiniteModule",
    "Submodule",
    "FiniteMap",
    "realize",
    "submodule",
    "membership",
    "sum_",
    "intersection",
    "quotient",
    "enumerate_elements",
    "all_subgroups",
    "resource_bound",
]

Coords = tuple


class AmbientMismatch(ValueError):
    pass


class TooLarge(RuntimeError):
    pass


def resource_bound(default_mb: int = 256) -> int:
    """Element-count guard derived from ``WALKER_RESOURCE_MB`` (64 bytes per element)."""
    try:
        mb = int(os.environ.get("WALKER_RESOURCE_MB", default_mb))
    except ValueError:
        mb = default_mb
    return max(1, mb) * (1 << 20) // 64


@dataclass(frozen=True, eq=False)
class FiniteModule:
    p: int
    exponents: tuple
    gen_ids: tuple | None = None
    # to_coords[k]: coordinates of generator gen_ids[k]
    to_coords: tuple | None = None
    # from_coords[i]: integer combination of generators equal to the i-th basis vector
    from_coords: tuple | None = None

    def __post_init__(self):
        if any(a < b for a, b in zip(self.exponents, self.exponents[1:])):
            raise ValueError("exponents must be non-increasing")
        if any(e < 1 for e in self.exponents):
            raise ValueError("exponents must be positive")

    @classmethod
    def cyclic_sum(cls, p: int, exponents: Sequence[int]) -> "FiniteModule":
        return cls(p, tuple(sorted(exponents, reverse=True)))

    def _key(self):
        return (self.p, self.exponents, self.gen_ids, self.to_coords)

    def __eq__(self, other):
        if not isinstance(other, FiniteModule):
            return NotImplemented
        return self is other or self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"FiniteModule(p={self.p}, exponents={list(self.exponents)})"

    @property
    def rank(self) -> int:
        return len(self.exponents)

    @cached_property
    def E(self) -> int:
        return self.exponents[0] if self.exponents else 0

    @cached_property
    def moduli(self) -> tuple:
        return tuple(self.p**e for e in self.exponents)

    @cached_property
    def log_order(self) -> int:
        return sum(self.exponents)

    @property
    def order(self) -> int:
        return self.p**self.log_order

    @cached_property
    def _scales(self) -> tuple:
        return tuple(self.p ** (self.E - e) for e in self.exponents)

    # -- coordinates ------------------------------------------------------

    def zero(self) -> Coords:
        return (0,) * self.rank

    def reduce(self, x) -> Coords:
        if len(x) != self.rank:
            raise AmbientMismatch(f"vector of length {len(x)} in module of rank {self.rank}")
        return tuple(a % m for a, m in zip(x, self.moduli))

    def add(self, x, y) -> Coords:
        return tuple((a + b) % m for a, b, m in zip(x, y, self.moduli))

    def sub(self, x, y) -> Coords:
        return tuple((a - b) % m for a, b, m in zip(x, y, self.moduli))

    def scale(self, c: int, x) -> Coords:
        return tuple(c * a % m for a, m in zip(x, self.moduli))

    def basis_vector(self, i: int) -> Coords:
        return tuple(int(k == i) for k in range(self.rank))

    def scaled(self, x) -> list[int]:
        return [a * s for a, s in zip(x, self._scales)]

    def unscaled(self, v) -> Coords:
        return tuple((a // s) % m for a, s, m in zip(v, self._scales, self.moduli))

    def order_of(self, x) -> int:
        """Exponent k with p^k the order of x."""
        k = 0
        for a, e in zip(x, self.exponents):
            if a % self.p**e:
                k = max(k, e - valuation(a, self.p))
        return k

    # -- generators (presented modules only) ------------------------------

    @cached_property
    def _gen_index(self) -> dict:
        if self.gen_ids is None:
            return {}
        return {g: k for k, g in enumerate(self.gen_ids)}

    def coords_of(self, raw) -> Coords:
        """Coordinates of a generator combination given as ``{gen_id: int}``."""
        if self.gen_ids is None:
            raise ValueError("module has no generators")
        acc = [0] * self.rank
        for g, c in raw.items():
            if not c:
                continue
            row = self.to_coords[self._gen_index[g]]
            for i, a in enumerate(row):
                acc[i] += c * a
        return self.reduce(acc)

    def combination_of(self, x) -> dict:
        """An integer generator combination ``{gen_id: int}`` with coordinates ``x``."""
        if self.gen_ids is None:
            raise ValueError("module has no generators")
        acc = [0] * len(self.gen_ids)
        for a, row in zip(x, self.from_coords):
            if a:
                for k, c in enumerate(row):
                    acc[k] += a * c
        return {g: c for g, c in zip(self.gen_ids, acc) if c}

    # -- subgroups --------------------------------------------------------

    def full(self) -> "Submodule":
        cached = self.__dict__.get("_full")
        if cached is None:
            cached = Submodule(self, [self.basis_vector(i) for i in range(self.rank)])
            self.__dict__["_full"] = cached
        return cached

    def zero_submodule(self) -> "Submodule":
        return Submodule(self, [])

    def elements(self, bound: int | None = None) -> Iterator[Coords]:
        return enumerate_elements(self, bound)


def realize(forest) -> FiniteModule:
    """Realize a finite forest presentation as a coordinatized finite p-group.

    One relation per generator: ``p*g - parent(g)``, or ``p*g`` for a root.
    """
    p = forest.p
    ids = tuple(forest.ordered_ids())
    index = {g: k for k, g in enumerate(ids)}
    n = len(ids)
    rel = []
    for g in ids:
        row = [0] * n
        row[index[g]] = p
        parent = forest.parent(g)
        if parent is not None:
            row[index[parent]] -= 1
        rel.append(row)
    snf = smith_form(rel, n)
    kept = []
    for k, d in enumerate(snf.diagonal):
        if d == 0:
            raise ValueError("relation matrix is not of full rank")
        if d != 1:
            e = valuation(d, p)
            if p**e != d:
                raise ValueError(f"invariant {d} is not a power of {p}")
            kept.append((e, k))
    kept.sort(key=lambda t: -t[0])
    exps = tuple(e for e, _ in kept)
    moduli = [p**e for e in exps]
    to_coords = tuple(
        tuple(snf.V[gi][k] % m for (_, k), m in zip(kept, moduli)) for gi in range(n)
    )
    from_coords = tuple(tuple(snf.Vinv[k]) for _, k in kept)
    return FiniteModule(p, exps, ids, to_coords, from_coords)


class Submodule:
    """Subgroup of a :class:`FiniteModule` held as a Howell basis in scaled coordinates."""

    __slots__ = ("ambient", "basis", "__dict__")

    def __init__(self, ambient: FiniteModule, gens=(), *, _basis=None):
        self.ambient = ambient
        if _basis is not None:
            self.basis = _basis
        else:
            rows = [ambient.scaled(ambient.reduce(g)) for g in gens]
            self.basis = howell_form(rows, ambient.p, ambient.E, ambient.rank)

    @classmethod
    def _from_scaled(cls, ambient, rows) -> "Submodule":
        return cls(ambient, _basis=howell_form(rows, ambient.p, ambient.E, ambient.rank))

    def _check(self, other: "Submodule"):
        if self.ambient is not other.ambient and self.ambient != other.ambient:
            raise AmbientMismatch("submodules of different modules")

    def __eq__(self, other):
        if not isinstance(other, Submodule):
            return NotImplemented
        return self.basis == other.basis and (
            self.ambient is other.ambient or self.ambient == other.ambient
        )

    def __hash__(self):
        return hash(self.basis)

    def __repr__(self):
        return f"Submodule(order={self.ambient.p}^{self.log_order}, gens={self.generators()})"

    @property
    def key(self):
        return self.basis

    @cached_property
    def log_order(self) -> int:
        E, p = self.ambient.E, self.ambient.p
        return sum(E - valuation(row[pivot_column(row)], p) for row in self.basis)

    @property
    def order(self) -> int:
        return self.ambient.p**self.log_order

    def generators(self) -> list[Coords]:
        return [self.ambient.unscaled(r) for r in self.basis]

    def contains(self, x) -> bool:
        G = self.ambient
        v = G.scaled(G.reduce(x))
        return not any(reduce_by_howell(self.basis, v, G.p**G.E))

    __contains__ = contains

    def __le__(self, other: "Submodule") -> bool:
        self._check(other)
        return all(other.contains(g) for g in self.generators())

    def __add__(self, other: "Submodule") -> "Submodule":
        self._check(other)
        return Submodule._from_scaled(self.ambient, list(self.basis) + list(other.basis))

    def __and__(self, other: "Submodule") -> "Submodule":
        self._check(other)
        G = self.ambient
        r = G.rank
        if not self.basis or not other.basis:
            return G.zero_submodule()
        rows = [list(a) + list(a) for a in self.basis]
        rows += [list(b) + [0] * r for b in other.basis]
        h = howell_form(rows, G.p, G.E, 2 * r)
        inter = [row[r:] for row in h if not any(row[:r])]
        return Submodule(G, _basis=howell_form(inter, G.p, G.E, r))

    def times(self, c: int) -> "Submodule":
        return Submodule._from_scaled(self.ambient, [[c * a for a in row] for row in self.basis])

    def socle(self) -> "Submodule":
        return self.torsion(1)

    def torsion(self, n: int) -> "Submodule":
        """Elements of this subgroup killed by p^n."""
        return self & torsion_subgroup(self.ambient, n)

    def elements(self) -> Iterator[Coords]:
        G = self.ambient
        N = G.p**G.E
        if not self.basis:
            yield G.zero()
            return
        ranges = []
        for row in self.basis:
            pk = row[pivot_column(row)]
            ranges.append(range(N // pk))
        rows = self.basis
        for cs in itertools.product(*ranges):
            v = [0] * G.rank
            for c, row in zip(cs, rows):
                if c:
                    for i, a in enumerate(row):
                        v[i] += c * a
            yield G.unscaled([a % N for a in v])

    def invariants(self) -> tuple:
        """Cyclic decomposition exponents, read off from the orders of p^k N."""
        sizes = []
        cur = self
        while cur.log_order:
            sizes.append(cur.log_order)
            cur = cur.times(self.ambient.p)
        sizes.append(0)
        ranks = [a - b for a, b in zip(sizes, sizes[1:])]  # number of summands of exponent > k
        exps = []
        for k, r in enumerate(ranks):
            nxt = ranks[k + 1] if k + 1 < len(ranks) else 0
            exps += [k + 1] * (r - nxt)
        return tuple(sorted(exps, reverse=True))


def torsion_subgroup(G: FiniteModule, n: int) -> Submodule:
    """G[p^n], the kernel of multiplication by p^n."""
    cache = G.__dict__.setdefault("_torsion", {})
    if n not in cache:
        gens = []
        for i, e in enumerate(G.exponents):
            gens.append(tuple(G.p ** max(e - n, 0) if k == i else 0 for k in range(G.rank)))
        cache[n] = Submodule(G, gens)
    return cache[n]


@dataclass(frozen=True, eq=False)
class FiniteMap:
    """Homomorphism between finite modules given by the images of basis vectors."""

    source: FiniteModule
    target: FiniteModule
    images: tuple  # images[i] = image of the i-th source basis vector
    section_rows: tuple | None = field(default=None)

    def __post_init__(self):
        T = self.target
        for e, img in zip(self.source.exponents, self.images):
            if any(a for a in T.scale(T.p**e, img)):
                raise ValueError("images do not respect source orders")

    def __call__(self, x) -> Coords:
        T = self.target
        acc = [0] * T.rank
        for a, img in zip(x, self.images):
            if a:
                for i, b in enumerate(img):
                    acc[i] += a * b
        return T.reduce(acc)

    def image(self, N: Submodule | None = None) -> Submodule:
        gens = self.images if N is None else [self(g) for g in N.generators()]
        return Submodule(self.target, gens)

    def kernel(self) -> Submodule:
        S, T = self.source, self.target
        E = max(S.E, T.E)
        rt, rs = T.rank, S.rank
        rows = []
        for i, img in enumerate(self.images):
            left = [a * T.p ** (E - f) for a, f in zip(img, T.exponents)]
            right = [0] * rs
            right[i] = S.p ** (E - S.exponents[i])
            rows.append(left + right)
        h = howell_form(rows, S.p, E, rt + rs)
        gens = []
        for row in h:
            if any(row[:rt]):
                continue
            gens.append(tuple((a // S.p ** (E - e)) % S.p**e for a, e in zip(row[rt:], S.exponents)))
        return Submodule(S, gens)

    def preimage(self, M: Submodule) -> Submodule:
        """Full preimage of a subgroup of the target."""
        _, pi = quotient(self.target, M)
        return (pi.compose_after(self)).kernel()

    def compose_after(self, first: "FiniteMap") -> "FiniteMap":
        """``self o first``."""
        if first.target != self.source:
            raise AmbientMismatch("maps are not composable")
        return FiniteMap(first.source, self.target, tuple(self(img) for img in first.images))

    def section(self, y) -> Coords:
        """A preimage of ``y`` under a quotient projection."""
        if self.section_rows is None:
            raise ValueError("map has no recorded section")
        S = self.source
        acc = [0] * S.rank
        for a, row in zip(y, self.section_rows):
            if a:
                for i, b in enumerate(row):
                    acc[i] += a * b
        return S.reduce(acc)


# -- functional surface ---------------------------------------------------


def submodule(G: FiniteModule, gens) -> Submodule:
    return Submodule(G, gens)


def membership(N: Submodule, x) -> bool:
    return N.contains(x)


def sum_(N1: Submodule, N2: Submodule) -> Submodule:
    return N1 + N2


def intersection(N1: Submodule, N2: Submodule) -> Submodule:
    return N1 & N2


def quotient(G: FiniteModule, N: Submodule) -> tuple[FiniteModule, FiniteMap]:
    """Realize ``G/N`` via the Smith form of ``diag(p^e_i)`` stacked on N's generators."""
    if N.ambient is not G and N.ambient != G:
        raise AmbientMismatch("submodule of a different module")
    r = G.rank
    rows = [[G.moduli[i] if k == i else 0 for k in range(r)] for i in range(r)]
    rows += [list(g) for g in N.generators()]
    snf = smith_form(rows, r)
    kept = []
    for k, d in enumerate(snf.diagonal):
        if d != 1:
            kept.append((valuation(d, G.p), k))
    kept.sort(key=lambda t: -t[0])
    Q = FiniteModule(G.p, tuple(e for e, _ in kept))
    images = tuple(
        tuple(snf.V[i][k] % G.p**e for e, k in kept) for i in range(r)
    )
    section = tuple(tuple(snf.Vinv[k]) for _, k in kept)
    return Q, FiniteMap(G, Q, images, section)


def enumerate_elements(G: FiniteModule, bound: int | None = None) -> Iterator[Coords]:
    if bound is None:
        bound = resource_bound()
    if G.order > bound:
        raise TooLarge(f"module of order {G.p}^{G.log_order} exceeds bound {bound}")
    return itertools.product(*(range(m) for m in G.moduli))


def cyclic_subgroups(G: FiniteModule, bound: int | None = None) -> list[Submodule]:
    seen = {}
    for x in enumerate_elements(G, bound):
        S = Submodule(G, [x])
        seen.setdefault(S.basis, S)
    return list(seen.values())


def all_subgroups(G: FiniteModule, bound: int | None = None) -> list[Submodule]:
    """Every subgroup of G, deduplicated by Howell basis.

    Grows the lattice from the trivial subgroup by joining cyclic subgroups;
    every finite abelian subgroup is a finite join of cyclic ones.
    """
    cyclic = cyclic_subgroups(G, bound)
    found = {(): G.zero_submodule()}
    frontier = [G.zero_submodule()]
    while frontier:
        nxt = []
        for S in frontier:
            for C in cyclic:
                if C.basis and not all(S.contains(g) for g in C.generators()):
                    J = S + C
                    if J.basis not in found:
                        found[J.basis] = J
                        nxt.append(J)
        frontier = nxt
    return sorted(found.values(), key=lambda S: (S.log_order, S.basis))
