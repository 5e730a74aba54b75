"""The p-power filtration of finite modules: p^sigma G, heights, socles, Ulm invariants.

Every finite reduced module has ``p^sigma G = 0`` once ``sigma`` reaches its
length, so infinite indices are clamped to that stable value.
"""

from __future__ import annotations

from dataclasses import dataclass

from .elements import Element
from .ordinal import INFINITY, Ordinal, ordinal
from .presentation import WalkerPresentation
from .realization import AmbientMismatch, FiniteModule, Submodule, torsion_subgroup

__all__ = [
    "UlmProfile",
    "p_sigma",
    "height",
    "generator_height",
    "antichain_height",
    "torsion_part",
    "socle",
    "length",
    "ulm_invariants",
    "closure",
    "sigma_count",
    "format_ulm_report",
]


def _coords(G: FiniteModule, x) -> tuple:
    if isinstance(x, Element):
        if x.forest.realization != G:
            raise AmbientMismatch("element does not belong to this module")
        return x.coords
    return G.reduce(x)


def _chain(G: FiniteModule) -> list[Submodule]:
    """[G, pG, p^2 G, ..., 0], cached on the module."""
    cache = G.__dict__.get("_p_chain")
    if cache is None:
        cache = [G.full()]
        while cache[-1].log_order:
            cache.append(cache[-1].times(G.p))
        G.__dict__["_p_chain"] = cache
    return cache


def length(G: FiniteModule) -> Ordinal:
    """Least n with p^(n+1) G = p^n G."""
    return Ordinal.from_int(len(_chain(G)) - 1)


def p_sigma(G: FiniteModule, sigma) -> Submodule:
    sigma = ordinal(sigma)
    chain = _chain(G)
    if not sigma.is_finite() or int(sigma) >= len(chain):
        return chain[-1]
    return chain[int(sigma)]


def sigma_count(G: FiniteModule, cutoff) -> int:
    """Number of finite indices sigma < min(cutoff, length(G) + 1)."""
    cutoff = ordinal(cutoff)
    top = int(length(G)) + 1
    if not cutoff.is_finite():
        return top
    return min(int(cutoff), top)


def height(G: FiniteModule, x):
    """Least sigma with x in p^sigma G but not in p^(sigma+1) G; INFINITY for 0."""
    x = _coords(G, x)
    if not any(x):
        return INFINITY
    chain = _chain(G)
    for s in range(len(chain) - 1):
        if not chain[s + 1].contains(x):
            return Ordinal.from_int(s)
    raise AssertionError("nonzero element in every filtration step")


def generator_height(P: WalkerPresentation, gid: str) -> Ordinal:
    """Height of a Walker generator: its last label."""
    return P.label(gid)


def antichain_height(x: Element):
    """Minimum label over the support of a normal-form element of a Walker module.

    Empirical shortcut; :func:`height` on the realization is authoritative.
    """
    if not x.terms:
        return INFINITY
    return min(x.forest.label(g) for g in x.terms)


def torsion_part(G: FiniteModule, n: int) -> Submodule:
    """G[p^n]."""
    return torsion_subgroup(G, n)


def socle(G: FiniteModule) -> Submodule:
    return torsion_subgroup(G, 1)


@dataclass(frozen=True)
class UlmProfile:
    p: int
    values: dict  # Ordinal -> int

    def mass(self) -> int:
        return sum(f * (int(s) + 1) for s, f in self.values.items())

    def line(self) -> str:
        return " ".join(f"{s}:{f}" for s, f in sorted(self.values.items()))


def ulm_invariants(G: FiniteModule) -> UlmProfile:
    """f_sigma = dim (p^sigma G)[p] / (p^(sigma+1) G)[p] for sigma < length(G)."""
    G_p = socle(G)
    values = {}
    chain = _chain(G)
    sizes = [(S & G_p).log_order for S in chain]
    for s in range(len(chain) - 1):
        values[Ordinal.from_int(s)] = sizes[s] - sizes[s + 1]
    return UlmProfile(G.p, values)


def format_ulm_report(profile: UlmProfile, G: FiniteModule) -> str:
    lines = [f"{s}: {f}" for s, f in sorted(profile.values.items())]
    mass = profile.mass()
    verdict = "PASS" if mass == G.log_order else "FAIL"
    lines.append(f"mass: sum f*(sigma+1) = {mass}, log_p|G| = {G.log_order} {verdict}")
    return "\n".join(lines)


def closure(G: FiniteModule, N: Submodule, lambda_cutoff) -> Submodule:
    """Intersection of p^sigma G + N over sigma < min(cutoff, length(G) + 1)."""
    result = G.full()
    for s in range(sigma_count(G, lambda_cutoff)):
        result = result & (p_sigma(G, s) + N)
    return result
