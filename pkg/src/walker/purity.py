"""Proper elements and the nice / isotypic / balanced predicates on submodules.

Each predicate has a ``*_failure`` companion that returns the first failing
index and a witnessing element (coordinates in the ambient module), or None.
Cutoffs are clamped at ``length(G) + 1``; pass ``OMEGA`` (or ``"w"``) to mean
every index.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .filtration import height, length, p_sigma, sigma_count, socle
from .ordinal import INFINITY, OMEGA, ordinal
from .realization import FiniteMap, FiniteModule, Submodule, quotient

__all__ = [
    "NotLimitOrdinal",
    "ResourceLimit",
    "Failure",
    "ShortExactSequence",
    "is_proper",
    "is_lambda_nice",
    "is_lambda_isotypic",
    "is_lambda_balanced",
    "balanced_criterion",
    "nice_failure",
    "isotypic_failure",
    "criterion_failure",
    "canonical_presentation",
    "CanonicalPresentation",
]


class NotLimitOrdinal(ValueError):
    pass


class ResourceLimit(RuntimeError):
    pass


@dataclass(frozen=True)
class Failure:
    what: str
    sigma: int
    witness: tuple  # coordinates in the ambient module G


@dataclass(eq=False)
class ShortExactSequence:
    """``0 -> N -> B -> B/N -> 0`` with the quotient realized explicitly."""

    B: FiniteModule
    N: Submodule
    _quot: tuple = field(init=False, repr=False)

    def __post_init__(self):
        if self.N.ambient != self.B:
            raise ValueError("N is not a submodule of B")
        self._quot = quotient(self.B, self.N)
        if self.B.log_order != self.N.log_order + self.C.log_order:
            raise ValueError("order accounting |B| = |N||C| failed")

    @property
    def C(self) -> FiniteModule:
        return self._quot[0]

    @property
    def pi(self) -> FiniteMap:
        return self._quot[1]

    @cached_property
    def A(self) -> Submodule:
        return self.N


def _quotient_of(G: FiniteModule, N: Submodule):
    cache = G.__dict__.setdefault("_quotients", {})
    key = N.basis
    if key not in cache:
        cache[key] = quotient(G, N)
    return cache[key]


def is_proper(G: FiniteModule, N: Submodule, x) -> bool:
    """Whether x has maximal height in its coset x + N."""
    h = height(G, x)
    if h is INFINITY:
        return N.contains(G.zero())
    return not (p_sigma(G, int(h) + 1) + N).contains(x)


def nice_failure(G: FiniteModule, N: Submodule, lambda_cutoff=OMEGA) -> Failure | None:
    Q, pi = _quotient_of(G, N)
    for s in range(sigma_count(G, lambda_cutoff)):
        lhs = p_sigma(Q, s)
        rhs = pi.image(p_sigma(G, s))
        if lhs != rhs:
            for y in lhs.generators():
                if not rhs.contains(y):
                    return Failure("nice", s, pi.section(y))
    return None


def isotypic_failure(G: FiniteModule, N: Submodule, lambda_cutoff=OMEGA) -> Failure | None:
    pN = N
    for s in range(sigma_count(G, lambda_cutoff)):
        meet = p_sigma(G, s) & N
        if meet != pN:
            for y in meet.generators():
                if not pN.contains(y):
                    return Failure("isotypic", s, y)
        pN = pN.times(G.p)
    return None


def criterion_failure(G: FiniteModule, N: Submodule, lambda_cutoff=OMEGA) -> Failure | None:
    """Socle test: (p^s G[p] + N)/N = p^s(G/N)[p] for all s below the cutoff."""
    cutoff = ordinal(lambda_cutoff)
    if not cutoff.is_limit():
        raise NotLimitOrdinal(f"limit ordinal required, got {cutoff}")
    Q, pi = _quotient_of(G, N)
    G_p, Q_p = socle(G), socle(Q)
    for s in range(sigma_count(G, cutoff)):
        lhs = pi.image(p_sigma(G, s) & G_p)
        rhs = p_sigma(Q, s) & Q_p
        if lhs != rhs:
            for y in rhs.generators():
                if not lhs.contains(y):
                    return Failure("criterion", s, pi.section(y))
    return None


def is_lambda_nice(G, N, lambda_cutoff=OMEGA) -> bool:
    return nice_failure(G, N, lambda_cutoff) is None


def is_lambda_isotypic(G, N, lambda_cutoff=OMEGA) -> bool:
    return isotypic_failure(G, N, lambda_cutoff) is None


def is_lambda_balanced(G, N, lambda_cutoff=OMEGA) -> bool:
    return is_lambda_isotypic(G, N, lambda_cutoff) and is_lambda_nice(G, N, lambda_cutoff)


def balanced_criterion(G, N, lambda_cutoff=OMEGA) -> bool:
    return criterion_failure(G, N, lambda_cutoff) is None


# -- canonical presentation -----------------------------------------------


@dataclass
class CanonicalPresentation:
    n: int
    p: int
    T: object  # ForestPresentation
    phi: object  # homlift.Morphism from T to the realization of P_n
    seq: ShortExactSequence
    hom_counts: dict  # beta -> |Hom(P_beta, P_n)| from invariants
    enumerated: dict  # beta -> number of morphisms produced by hom_set
    top_copies: int
    surjective: bool

    def summary(self) -> str:
        parts = [f"P_{b}^{c}" for b, c in sorted(self.hom_counts.items())]
        if self.top_copies:
            parts.append(f"P_{self.n}^{self.top_copies}")
        return "T = " + " + ".join(parts)

    @property
    def K(self) -> Submodule:
        return self.seq.N


def canonical_presentation(
    n: int, p: int, *, allow_large: bool = False, include_top: bool = True
) -> CanonicalPresentation:
    """Finite analogue of ``T -> P_n`` with T a sum of copies of ``P_beta``, one per morphism.

    For every ``beta < n`` there is one copy of ``P_beta`` per element of
    ``Hom(P_beta, P_n)`` (zero map included), mapped by that morphism.  At
    finite ``n`` those maps land in ``P_n[p^n]``, so with ``include_top`` one
    copy of ``P_n`` mapped by the identity is added to make ``phi`` onto.
    """
    from .homlift import Morphism, hom_count, hom_set
    from .presentation import ForestPresentation, p_beta

    if n > 3 or (n == 3 and not allow_large):
        raise ResourceLimit(f"n = {n} needs allow_large (n <= 3 only)")
    target = p_beta(n, p)
    H = target.realization
    parents: dict = {}
    images: dict = {}
    counts: dict = {}
    enumerated: dict = {}
    for beta in range(n):
        src = p_beta(beta, p)
        counts[beta] = hom_count(src.realization, H)
        homs = hom_set(src, H, bound=1 << 20)
        enumerated[beta] = len(homs)
        width = len(str(len(homs)))
        for k, h in enumerate(homs):
            prefix = f"P{beta}[{k:0{width}d}]/"
            for g in src.ordered_ids():
                par = src.parent(g)
                parents[prefix + g] = None if par is None else prefix + par
                images[prefix + g] = h.images[g]
    top_copies = 0
    if include_top:
        top_copies = 1
        prefix = f"P{n}[0]/"
        for g in target.ordered_ids():
            par = target.parent(g)
            parents[prefix + g] = None if par is None else prefix + par
            images[prefix + g] = H.coords_of({g: 1})
    T = ForestPresentation(p, parents)
    phi = Morphism(T, H, images)
    fmap = phi.as_finite_map()
    K = fmap.kernel()
    surjective = fmap.image() == H.full()
    seq = ShortExactSequence(T.realization, K)
    return CanonicalPresentation(n, p, T, phi, seq, counts, enumerated, top_copies, surjective)
