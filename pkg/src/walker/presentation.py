"""Forest presentations of simply presented torsion modules.

A forest presentation has one generator per node.  A node ``g`` with parent
``h`` carries the relation ``p*g = h``; a root carries ``p*g = 0``.  The Walker
module ``P_beta`` is the forest whose nodes are the strictly decreasing ordinal
sequences starting at ``beta``, the parent of a sequence being the sequence
with its last entry removed.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, Mapping

from .ordinal import Ordinal, ordinal

__all__ = [
    "SEP",
    "ForestPresentation",
    "WalkerPresentation",
    "LabelNotBelowBeta",
    "NotMaterialized",
    "NotAncestorClosed",
    "UnknownGenerator",
    "QuotientSummand",
    "p_beta",
    "x_alpha",
    "kappa",
    "quotient_by_x_alpha",
    "quotient_by_top",
    "quotient_forest",
    "finite_restriction",
    "from_relations",
    "enumerate_forests",
    "random_forest",
]

SEP = "·"  # joins the ordinals of a Walker generator id


class LabelNotBelowBeta(ValueError):
    pass


class NotMaterialized(KeyError):
    pass


class NotAncestorClosed(ValueError):
    pass


class UnknownGenerator(KeyError):
    pass


class ForestPresentation:
    """Generators with p-action edges forming a forest.

    ``parents`` maps each generator id to its parent id (``None`` for roots).
    ``labels`` optionally attaches an ordinal to each node; children must then
    carry strictly smaller labels than their parents.
    """

    def __init__(
        self,
        p: int,
        parents: Mapping[str, str | None],
        labels: Mapping[str, Ordinal] | None = None,
    ):
        if p < 2 or any(p % q == 0 for q in range(2, int(p**0.5) + 1)):
            raise ValueError(f"{p} is not a prime")
        self.p = p
        self._parents = dict(parents)
        self._labels = {g: ordinal(v) for g, v in labels.items()} if labels else None
        for g, h in self._parents.items():
            if h is not None and h not in self._parents:
                raise UnknownGenerator(f"parent {h!r} of {g!r} is not a generator")
        for g in self._parents:
            seen = set()
            h = g
            while h is not None:
                if h in seen:
                    raise ValueError(f"parent links through {g!r} form a cycle")
                seen.add(h)
                h = self._parents[h]
        if self._labels is not None:
            if set(self._labels) != set(self._parents):
                raise ValueError("labels must cover every generator")
            for g, h in self._parents.items():
                if h is not None and not self._labels[g] < self._labels[h]:
                    raise ValueError(f"label of {g!r} is not below its parent's")

    def __repr__(self):
        return f"{type(self).__name__}(p={self.p}, generators={len(self._parents)})"

    def __len__(self) -> int:
        return len(self._parents)

    def __contains__(self, gid) -> bool:
        return gid in self._parents

    @property
    def parents(self) -> dict:
        return dict(self._parents)

    @property
    def labels(self) -> dict | None:
        return None if self._labels is None else dict(self._labels)

    def ordered_ids(self) -> list[str]:
        return sorted(self._parents)

    def parent(self, gid: str) -> str | None:
        try:
            return self._parents[gid]
        except KeyError:
            raise UnknownGenerator(gid) from None

    def label(self, gid: str) -> Ordinal | None:
        if gid not in self._parents:
            raise UnknownGenerator(gid)
        return None if self._labels is None else self._labels[gid]

    @cached_property
    def _children(self) -> dict:
        ch = defaultdict(list)
        for g in sorted(self._parents):
            h = self._parents[g]
            if h is not None:
                ch[h].append(g)
        return dict(ch)

    def children(self, gid: str) -> list[str]:
        return list(self._children.get(gid, ()))

    def roots(self) -> list[str]:
        return sorted(g for g, h in self._parents.items() if h is None)

    @cached_property
    def _depth(self) -> dict:
        depth = {}
        for g in self.top_down():
            h = self._parents[g]
            depth[g] = 0 if h is None else depth[h] + 1
        return depth

    def depth(self, gid: str) -> int:
        if gid not in self._parents:
            raise UnknownGenerator(gid)
        return self._depth[gid]

    def order_exponent(self, gid: str) -> int:
        """k such that the generator has order p^k."""
        return self.depth(gid) + 1

    def top_down(self) -> list[str]:
        """Generators ordered so that every parent precedes its children."""
        out = []
        stack = list(reversed(self.roots()))
        while stack:
            g = stack.pop()
            out.append(g)
            stack.extend(reversed(self._children.get(g, ())))
        return out

    def subtree(self, gid: str) -> list[str]:
        out = []
        stack = [gid]
        while stack:
            g = stack.pop()
            out.append(g)
            stack.extend(reversed(self._children.get(g, ())))
        return out

    def ancestors(self, gid: str) -> list[str]:
        out = []
        h = self.parent(gid)
        while h is not None:
            out.append(h)
            h = self._parents[h]
        return out

    def is_ancestor(self, a: str, b: str) -> bool:
        """True if ``a`` is a proper ancestor of ``b``."""
        h = self._parents[b]
        while h is not None:
            if h == a:
                return True
            h = self._parents[h]
        return False

    @cached_property
    def realization(self):
        from .realization import realize

        return realize(self)

    def restrict(self, keep: Iterable[str]) -> "ForestPresentation":
        keep = set(keep)
        for g in keep:
            if g not in self._parents:
                raise UnknownGenerator(g)
            h = self._parents[g]
            if h is not None and h not in keep:
                raise NotAncestorClosed(f"{g!r} kept without its parent {h!r}")
        labels = None if self._labels is None else {g: self._labels[g] for g in keep}
        return ForestPresentation(self.p, {g: self._parents[g] for g in keep}, labels)


def _seq_id(seq) -> str:
    return SEP.join(str(o) for o in seq)


class WalkerPresentation(ForestPresentation):
    """A materialized fragment of ``P_beta``.

    ``label_set`` holds the ordinals allowed after the leading ``beta``; for
    finite ``beta`` built with ``"all-finite"`` it is ``{0, ..., beta-1}`` and
    the fragment is the whole module.
    """

    def __init__(self, beta, p: int, label_set: Iterable):
        self.beta = ordinal(beta)
        self.label_set = tuple(sorted({ordinal(x) for x in label_set}, reverse=True))
        for lab in self.label_set:
            if not lab < self.beta:
                raise LabelNotBelowBeta(f"label {lab} is not below beta = {self.beta}")
        parents: dict = {}
        labels: dict = {}
        self._seqs: dict = {}

        def grow(seq, gid, parent):
            parents[gid] = parent
            labels[gid] = seq[-1]
            self._seqs[gid] = seq
            for lab in self.label_set:
                if lab < seq[-1]:
                    child = seq + (lab,)
                    grow(child, _seq_id(child), gid)

        grow((self.beta,), _seq_id((self.beta,)), None)
        super().__init__(p, parents, labels)
        self.top = _seq_id((self.beta,))

    @property
    def base(self) -> ForestPresentation:
        return self

    @property
    def depth_bound(self) -> int:
        return max(len(s) for s in self._seqs.values())

    @property
    def is_complete(self) -> bool:
        return self.beta.is_finite() and len(self.label_set) == int(self.beta)

    def sequence(self, gid: str) -> tuple:
        try:
            return self._seqs[gid]
        except KeyError:
            raise UnknownGenerator(gid) from None

    def materialized(self, alpha) -> bool:
        alpha = ordinal(alpha)
        return alpha == self.beta or alpha in self.label_set

    def gid(self, *labels) -> str:
        """Generator id of the sequence ``beta, labels...``."""
        return _seq_id((self.beta,) + tuple(ordinal(x) for x in labels))


def p_beta(beta, p: int, label_set="all-finite") -> WalkerPresentation:
    beta = ordinal(beta)
    if isinstance(label_set, str):
        if label_set != "all-finite":
            raise ValueError(f"unknown label set {label_set!r}")
        if not beta.is_finite():
            raise ValueError("infinite beta needs an explicit finite label set")
        return _p_beta_finite(int(beta), p)
    return WalkerPresentation(beta, p, label_set)


@lru_cache(maxsize=64)
def _p_beta_finite(beta: int, p: int) -> WalkerPresentation:
    return WalkerPresentation(beta, p, range(beta))


def x_alpha(P: WalkerPresentation, alpha) -> list[str]:
    """Materialized generators whose last label is ``alpha``; they generate p^alpha P."""
    alpha = ordinal(alpha)
    if alpha > P.beta:
        raise ValueError(f"alpha = {alpha} exceeds beta = {P.beta}")
    if not P.materialized(alpha):
        raise NotMaterialized(f"label {alpha} is not materialized")
    return sorted(g for g in P.ordered_ids() if P.label(g) == alpha)


def kappa(P: WalkerPresentation, gamma, alpha) -> int:
    """Number of sequences ending in ``gamma`` whose previous entry is at least ``alpha``."""
    gamma, alpha = ordinal(gamma), ordinal(alpha)
    if not gamma < alpha <= P.beta:
        raise ValueError("need gamma < alpha <= beta")
    if not (P.materialized(gamma) and P.materialized(alpha)):
        raise NotMaterialized(f"labels {gamma}, {alpha} must be materialized")
    count = 0
    for g in P.ordered_ids():
        seq = P.sequence(g)
        if len(seq) >= 2 and seq[-1] == gamma and seq[-2] >= alpha:
            count += 1
    return count


@dataclass(frozen=True)
class QuotientSummand:
    gamma: Ordinal
    copies: int
    # original generator id -> (copy index, generator id in P_gamma)
    renaming: dict

    def copy_roots(self) -> list[str]:
        roots = {}
        for orig, (k, new) in self.renaming.items():
            if SEP not in new:
                roots[k] = orig
        return [roots[k] for k in sorted(roots)]


def quotient_forest(P: WalkerPresentation, alpha) -> ForestPresentation:
    """The forest presenting ``P / X_alpha``: killed generators removed, orphans become roots."""
    alpha = ordinal(alpha)
    x_alpha(P, alpha)  # validates alpha
    keep = [g for g in P.ordered_ids() if P.label(g) < alpha]
    parents = {}
    for g in keep:
        h = P.parent(g)
        parents[g] = h if h is not None and P.label(h) < alpha else None
    return ForestPresentation(P.p, parents, {g: P.label(g) for g in keep})


def quotient_by_x_alpha(P: WalkerPresentation, alpha) -> list[QuotientSummand]:
    """Decompose ``P / X_alpha`` as a sum of copies of ``P_gamma``, ``gamma < alpha``.

    The surviving generators are the sequences with last entry below ``alpha``;
    each one whose parent was killed roots a copy of ``P_gamma``.
    """
    Q = quotient_forest(P, alpha)
    by_gamma: dict = defaultdict(list)
    for r in Q.roots():
        by_gamma[Q.label(r)].append(r)
    out = []
    for gamma in sorted(by_gamma):
        renaming = {}
        for k, r in enumerate(by_gamma[gamma]):
            cut = len(P.sequence(r)) - 1
            for g in Q.subtree(r):
                renaming[g] = (k, _seq_id(P.sequence(g)[cut:]))
        out.append(QuotientSummand(gamma, len(by_gamma[gamma]), renaming))
    return out


def quotient_by_top(P: WalkerPresentation) -> list[QuotientSummand]:
    """``P_beta / <beta>``: one copy of ``P_gamma`` for each materialized ``gamma < beta``."""
    return quotient_by_x_alpha(P, P.beta)


def finite_restriction(P: ForestPresentation, F: Iterable[str]) -> ForestPresentation:
    return P.restrict(F)


def from_relations(p: int, relations: Iterable[tuple]) -> ForestPresentation:
    """Ingest a simply presented module given by relations ``p^n x = y`` or ``p^m x = 0``.

    Each relation is ``(x, n, y)`` with ``y`` a generator or ``None``.  Every
    generator needs exactly one relation.  Intermediate generators
    ``x~1 = p x, x~2 = p^2 x, ...`` are inserted so that all edges are single
    multiplications by p.
    """
    relations = list(relations)
    gens = [r[0] for r in relations]
    if len(set(gens)) != len(gens):
        raise ValueError("each generator may carry only one relation")
    parents = {}
    for x, n, y in relations:
        if n < 1:
            raise ValueError(f"exponent {n} in relation for {x!r} must be positive")
        if y is not None and y not in gens:
            raise UnknownGenerator(y)
        # p^n x = y  : chain x -> x~1 -> ... -> x~(n-1) -> y
        # p^m x = 0  : chain x -> ... -> x~(m-1) as a root
        chain = [x] + [f"{x}~{k}" for k in range(1, n)]
        for a, b in zip(chain, chain[1:]):
            parents[a] = b
        parents[chain[-1]] = y
    return ForestPresentation(p, parents)


# -- forest enumeration ---------------------------------------------------


@lru_cache(maxsize=None)
def _forest_shapes(n: int) -> tuple:
    """Unlabeled rooted forests on n nodes as sorted tuples of trees."""
    if n == 0:
        return ((),)
    out = set()
    for k in range(1, n + 1):
        for tree in _tree_shapes(k):
            for rest in _forest_shapes(n - k):
                out.add(tuple(sorted((tree,) + rest)))
    return tuple(sorted(out))


@lru_cache(maxsize=None)
def _tree_shapes(n: int) -> tuple:
    return tuple(sorted(_forest_shapes(n - 1)))


def _shape_to_parents(shape) -> dict:
    parents = {}
    counter = [0]

    def place(tree, parent):
        gid = f"n{counter[0]:02d}"
        counter[0] += 1
        parents[gid] = parent
        for child in tree:
            place(child, gid)

    for tree in shape:
        place(tree, None)
    return parents


def enumerate_forests(n: int, p: int) -> Iterator[ForestPresentation]:
    """Every forest on exactly ``n`` nodes, one per isomorphism class."""
    for shape in _forest_shapes(n):
        yield ForestPresentation(p, _shape_to_parents(shape))


def random_forest(rng, max_nodes: int, p: int) -> ForestPresentation:
    n = rng.randint(1, max_nodes)
    parents = {}
    for i in range(n):
        j = rng.randint(-1, i - 1)
        parents[f"n{i:02d}"] = None if j < 0 else f"n{j:02d}"
    return ForestPresentation(p, parents)
