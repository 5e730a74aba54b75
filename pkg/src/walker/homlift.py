"""Morphisms out of forest presentations, Hom sets, and lifting along balanced sequences.

A :class:`Morphism` sends every generator of a forest to an element (in
coordinates) of a finite module, subject to the forest relations.

:func:`build_morphism` and :func:`lift` are constructive: every existential
choice is resolved by taking the lexicographically least coordinate vector.
:func:`liftable` decides liftability independently by a subtree-by-subtree
search over the elements of the middle module.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass

from .filtration import height, p_sigma
from .ordinal import INFINITY, ordinal
from .presentation import ForestPresentation, WalkerPresentation, p_beta
from .purity import ShortExactSequence
from .realization import FiniteMap, FiniteModule, Submodule, TooLarge, enumerate_elements

__all__ = [
    "Morphism",
    "ShapeMismatch",
    "HeightTooLow",
    "NotInSocle",
    "NotLiftable",
    "RelationViolation",
    "hom_count",
    "hom_set",
    "hom_generators",
    "random_morphism",
    "morphism_from_basis_images",
    "build_morphism",
    "lift",
    "liftable",
    "compose",
    "morphism_eq",
    "nu_embedding",
    "restrict_along_embedding",
    "DEFAULT_HOM_CAP",
]

DEFAULT_HOM_CAP = 1 << 20


class ShapeMismatch(ValueError):
    pass


class RelationViolation(ValueError):
    pass


class HeightTooLow(ValueError):
    pass


class NotInSocle(ValueError):
    pass


class NotLiftable(Exception):
    """No element of ``p^sigma B[p]`` maps onto ``element`` (coordinates in C)."""

    def __init__(self, sigma: int, element: tuple, generator: str):
        self.sigma = sigma
        self.element = element
        self.generator = generator
        super().__init__(f"sigma={sigma} element={list(element)} generator={generator}")


class Morphism:
    def __init__(self, source: ForestPresentation, target: FiniteModule, images: dict):
        self.source = source
        self.target = target
        self.images = {g: target.reduce(images[g]) for g in source.ordered_ids()}
        H = target
        for g, x in self.images.items():
            par = source.parent(g)
            want = H.zero() if par is None else self.images[par]
            if H.scale(H.p, x) != want:
                raise RelationViolation(f"p * f({g}) != f(parent) ")

    def __call__(self, gid: str) -> tuple:
        return self.images[gid]

    def __eq__(self, other):
        if not isinstance(other, Morphism):
            return NotImplemented
        return morphism_eq(self, other)

    def __hash__(self):
        return hash(tuple(sorted(self.images.items())))

    def __repr__(self):
        return f"Morphism({len(self.images)} generators -> {self.target!r})"

    def __add__(self, other: "Morphism") -> "Morphism":
        if other.source is not self.source or other.target != self.target:
            raise ShapeMismatch("morphisms with different shapes")
        H = self.target
        return Morphism(
            self.source, H, {g: H.add(x, other.images[g]) for g, x in self.images.items()}
        )

    def __sub__(self, other: "Morphism") -> "Morphism":
        H = self.target
        neg = Morphism(other.source, H, {g: H.scale(-1, x) for g, x in other.images.items()})
        return self + neg

    def is_zero(self) -> bool:
        return not any(any(x) for x in self.images.values())

    def as_finite_map(self) -> FiniteMap:
        """The induced map on the realization of the source."""
        S = self.source.realization
        H = self.target
        imgs = []
        for row in S.from_coords:
            acc = [0] * H.rank
            for g, c in zip(S.gen_ids, row):
                if c:
                    for i, a in enumerate(self.images[g]):
                        acc[i] += c * a
            imgs.append(H.reduce(acc))
        return FiniteMap(S, H, tuple(imgs))


def compose(f: Morphism, g: FiniteMap) -> Morphism:
    """``g o f``."""
    if g.source != f.target:
        raise ShapeMismatch("target of f is not the source of g")
    return Morphism(f.source, g.target, {k: g(v) for k, v in f.images.items()})


def morphism_eq(f: Morphism, g: Morphism) -> bool:
    if f.source.parents != g.source.parents or f.target != g.target:
        return False
    return all(f.images[k] == g.images[k] for k in f.images)


def identity_map(G: FiniteModule) -> FiniteMap:
    return FiniteMap(G, G, tuple(G.basis_vector(i) for i in range(G.rank)))


# -- Hom sets ---------------------------------------------------------------


def hom_count(S: FiniteModule, H: FiniteModule) -> int:
    """|Hom(S, H)| = p^(sum over summand pairs of min(a_i, c_j))."""
    return S.p ** sum(min(a, c) for a in S.exponents for c in H.exponents)


def _division_table(H: FiniteModule, bound) -> dict:
    """y -> sorted list of x with p*x = y."""
    table = defaultdict(list)
    for x in enumerate_elements(H, bound):
        table[H.scale(H.p, x)].append(x)
    return table


def hom_set(F: ForestPresentation, H: FiniteModule, bound: int = DEFAULT_HOM_CAP) -> list[Morphism]:
    """Every morphism F -> H, enumerated by solving the relations generator by generator."""
    predicted = hom_count(F.realization, H)
    if predicted > bound:
        raise TooLarge(f"|Hom| = {predicted} exceeds bound {bound}")
    table = _division_table(H, max(bound, H.order))
    order = F.top_down()
    out = []

    def extend(k, images):
        if k == len(order):
            out.append(Morphism(F, H, images))
            return
        g = order[k]
        par = F.parent(g)
        want = H.zero() if par is None else images[par]
        for x in table.get(want, ()):
            images[g] = x
            extend(k + 1, images)
        images.pop(g, None)

    extend(0, {})
    if len(out) != predicted:
        raise AssertionError(f"enumerated {len(out)} morphisms, expected {predicted}")
    return out


def morphism_from_basis_images(F: ForestPresentation, H: FiniteModule, cs) -> Morphism:
    """The morphism sending the i-th basis vector of F's realization to ``cs[i]``."""
    S = F.realization
    images = {}
    for g, row in zip(S.gen_ids, S.to_coords):
        acc = [0] * H.rank
        for t, c in zip(row, cs):
            if t:
                for i, a in enumerate(c):
                    acc[i] += t * a
        images[g] = H.reduce(acc)
    return Morphism(F, H, images)


def hom_generators(F: ForestPresentation, H: FiniteModule) -> list[Morphism]:
    """A generating set of the group Hom(F, H)."""
    S = F.realization
    out = []
    for i, a in enumerate(S.exponents):
        for h in H.full().torsion(a).generators():
            cs = [H.zero()] * S.rank
            cs[i] = h
            out.append(morphism_from_basis_images(F, H, cs))
    return out


def random_morphism(F: ForestPresentation, H: FiniteModule, rng) -> Morphism:
    S = F.realization
    cs = []
    for a in S.exponents:
        acc = H.zero()
        for h in H.full().torsion(a).generators():
            acc = H.add(acc, H.scale(rng.randrange(H.p ** H.E), h))
        cs.append(acc)
    return morphism_from_basis_images(F, H, cs)


# -- construction and lifting ---------------------------------------------


def _least_divisor(G: FiniteModule, y: tuple, sigma: int) -> tuple | None:
    """Least x (coordinatewise) with p*x = y and x in p^sigma G."""
    p = G.p
    out = []
    for yi, e in zip(y, G.exponents):
        if yi % p:
            return None
        base = yi // p
        step = p ** (e - 1)
        need = p ** min(sigma, e)
        for t in range(p):
            xi = base + t * step
            if xi % need == 0:
                out.append(xi)
                break
        else:
            return None
    return tuple(out)


def _extend_down(P: ForestPresentation, G: FiniteModule, root: str, value: tuple) -> dict:
    """Images of the subtree under ``root``: each child gets the least valid p-th root."""
    images = {root: value}
    stack = [root]
    while stack:
        g = stack.pop()
        for c in P.children(g):
            sigma = int(P.label(c))
            x = _least_divisor(G, images[g], sigma)
            if x is None:
                raise HeightTooLow(f"no p-th root of f({g}) in p^{sigma}G")
            images[c] = x
            stack.append(c)
    return images


def build_morphism(beta, G: FiniteModule, g) -> Morphism:
    """A morphism P_beta -> G sending the top generator to g (g in p^beta G[p])."""
    beta = ordinal(beta)
    if not beta.is_finite():
        raise ValueError("build_morphism needs a finite beta")
    g = G.reduce(g)
    h = height(G, g)
    if h is not INFINITY and h < beta:
        raise HeightTooLow(f"height {h} < beta = {beta}")
    if any(G.scale(G.p, g)):
        raise NotInSocle(f"p * {list(g)} != 0")
    P = p_beta(beta, G.p)
    return Morphism(P, G, _extend_down(P, G, P.top, g))


class _Lifter:
    def __init__(self, seq: ShortExactSequence, bound=None):
        self.seq = seq
        self.bound = bound
        # preimage tables depend only on the sequence; share them across lifts
        self._fibres: dict = seq.__dict__.setdefault("_lift_fibres", {})

    def least_preimage(self, sigma: int, t: tuple):
        """Least b in p^sigma B[p] with pi(b) = t."""
        table = self._fibres.get(sigma)
        if table is None:
            B = self.seq.B
            S = p_sigma(B, sigma) & B.full().socle()
            if self.bound is not None and S.order > self.bound:
                raise TooLarge(f"p^{sigma}B[p] has order {S.order}")
            table = {}
            for b in sorted(S.elements()):
                table.setdefault(self.seq.pi(b), b)
            self._fibres[sigma] = table
        return table.get(t)

    def lift(self, P: ForestPresentation, root: str, defect: dict) -> dict:
        B, C, pi = self.seq.B, self.seq.C, self.seq.pi
        sigma = int(P.label(root))
        b = self.least_preimage(sigma, defect[root])
        if b is None:
            raise NotLiftable(sigma, defect[root], root)
        g = _extend_down(P, B, root, b)
        result = dict(g)
        for child in P.children(root):
            sub = P.subtree(child)
            rest = {n: C.sub(defect[n], pi(g[n])) for n in sub}
            for n, x in self.lift(P, child, rest).items():
                result[n] = B.add(result[n], x)
        return result


def lift(seq: ShortExactSequence, f: Morphism, bound: int | None = None) -> Morphism:
    """Lift f: P_beta -> C through B -> C, or raise :class:`NotLiftable`.

    Induction on beta: pick b in p^beta B[p] over f(top), extend it to
    g: P_beta -> B, then lift the defect f - pi g, which vanishes on the top
    generator, separately on each subtree ``beta gamma ...`` (a copy of
    P_gamma), and add the results to g.
    """
    P = f.source
    if not isinstance(P, WalkerPresentation) or not P.beta.is_finite():
        raise ShapeMismatch("lift needs a morphism out of P_beta with beta finite")
    if f.target != seq.C:
        raise ShapeMismatch("f does not map into the quotient of the sequence")
    lifter = _Lifter(seq, bound)
    images = lifter.lift(P, P.top, dict(f.images))
    out = Morphism(P, seq.B, images)
    if compose(out, seq.pi).images != f.images:
        raise AssertionError("lift does not compose back to f")
    return out


def liftable(seq: ShortExactSequence, f: Morphism, bound: int | None = None) -> bool:
    """Whether some morphism h: source -> B has pi o h = f, decided by exhaustive search.

    For each generator s the set L(s) of admissible values h(s) is the fibre
    over f(s) intersected with p * L(c) for every child c; roots must also be
    killed by p.
    """
    B, pi = seq.B, seq.pi
    F = f.source
    fibre = defaultdict(set)
    for b in enumerate_elements(B, bound):
        fibre[pi(b)].add(b)
    admissible: dict = {}
    for g in reversed(F.top_down()):
        cand = set(fibre.get(f.images[g], ()))
        for c in F.children(g):
            cand &= {B.scale(B.p, x) for x in admissible[c]}
        if F.parent(g) is None:
            cand = {x for x in cand if not any(B.scale(B.p, x))}
        if not cand:
            return False
        admissible[g] = cand
    return True


# -- the embeddings P_beta -> P_lambda --------------------------------------


def nu_embedding(beta, lam, p: int) -> dict:
    """Generator renaming ``beta b1 ... bn -> lam b1 ... bn`` for beta <= lam."""
    src, dst = p_beta(beta, p), p_beta(lam, p)
    if src.beta > dst.beta:
        raise ShapeMismatch("beta must not exceed lambda")
    out = {}
    for g in src.ordered_ids():
        seq = src.sequence(g)
        out[g] = dst.gid(*seq[1:])
    return out


def restrict_along_embedding(beta, f: Morphism) -> Morphism:
    """``f o nu_beta`` for a morphism f out of P_lambda."""
    P = f.source
    if not isinstance(P, WalkerPresentation):
        raise ShapeMismatch("f must be a morphism out of a Walker module")
    rename = nu_embedding(beta, P.beta, P.p)
    src = p_beta(beta, P.p)
    return Morphism(src, f.target, {g: f.images[rename[g]] for g in src.ordered_ids()})
