"""Brute-force models used as independent oracles in the tests.

``CarryGroup`` models a forest-presented module without any matrix algebra:
every element is a digit vector ``(c_g)`` with ``0 <= c_g < p``, and addition
propagates carries from each generator to its parent (``p*g = parent``),
dropping carries out of roots (``p*root = 0``).
"""

from __future__ import annotations

import itertools
from collections import Counter


class CarryGroup:
    def __init__(self, forest):
        self.p = forest.p
        self.ids = forest.ordered_ids()
        self.index = {g: i for i, g in enumerate(self.ids)}
        self.parent = [
            None if forest.parent(g) is None else self.index[forest.parent(g)] for g in self.ids
        ]
        depth = [forest.depth(g) for g in self.ids]
        # deepest first, so carries only travel towards processed-later nodes
        self.order = sorted(range(len(self.ids)), key=lambda i: -depth[i])

    def zero(self):
        return (0,) * len(self.ids)

    def from_raw(self, raw):
        v = [0] * len(self.ids)
        for g, c in raw.items():
            v[self.index[g]] += c
        return self._carry(v)

    def _carry(self, v):
        v = list(v)
        p = self.p
        for i in self.order:
            q, r = divmod(v[i], p)
            v[i] = r
            if self.parent[i] is not None:
                v[self.parent[i]] += q
        return tuple(v)

    def add(self, x, y):
        return self._carry([a + b for a, b in zip(x, y)])

    def scale(self, c, x):
        # c may be negative; scale by a nonnegative representative of c modulo the exponent
        c %= self.p ** (len(self.ids) + 1)
        return self._carry([c * a for a in x])

    def elements(self):
        return itertools.product(range(self.p), repeat=len(self.ids))

    def log_order(self):
        return len(self.ids)

    def invariants(self):
        return invariants_from_elements(self.elements(), lambda k, x: self.scale(self.p**k, x), self.zero(), self.p)


def invariants_from_elements(elements, pow_times, zero, p):
    """Cyclic decomposition exponents from |G[p^k]| counts."""
    elements = list(elements)
    killed = Counter()
    top = 0
    for x in elements:
        k = 0
        while pow_times(k, x) != zero:
            k += 1
        killed[k] += 1
        top = max(top, k)
    logs = []
    total = 0
    for k in range(top + 1):
        total += killed[k]
        logs.append(round_log(total, p))
    # number of summands with exponent >= k is logs[k] - logs[k-1]
    ge = [logs[k] - logs[k - 1] for k in range(1, top + 1)]
    exps = []
    for k, r in enumerate(ge, start=1):
        nxt = ge[k] if k < len(ge) else 0
        exps += [k] * (r - nxt)
    return tuple(sorted(exps, reverse=True))


def round_log(n, p):
    k = 0
    while p**k < n:
        k += 1
    assert p**k == n, (n, p)
    return k


class CyclicSum:
    """Z/p^e_1 + ... + Z/p^e_r with plain tuples."""

    def __init__(self, p, exponents):
        self.p = p
        self.moduli = tuple(p**e for e in exponents)

    def zero(self):
        return (0,) * len(self.moduli)

    def add(self, x, y):
        return tuple((a + b) % m for a, b, m in zip(x, y, self.moduli))

    def scale(self, c, x):
        return tuple(c * a % m for a, m in zip(x, self.moduli))

    def elements(self):
        return itertools.product(*(range(m) for m in self.moduli))

    def span(self, gens):
        """The subgroup generated by ``gens`` as a frozenset, by closure."""
        seen = {self.zero()}
        frontier = [self.zero()]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.add(x, g)
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return frozenset(seen)

    def p_power_subgroup(self, k):
        return frozenset(self.scale(self.p**k, x) for x in self.elements())

    def height(self, x):
        if x == self.zero():
            return None
        k = 0
        while x in self.p_power_subgroup(k + 1):
            k += 1
        return k
