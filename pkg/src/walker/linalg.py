"""Exact integer and residue-ring linear algebra.

Matrices are plain lists of lists of Python ints (rows).  Two kernels live here:

* :func:`smith_form` diagonalizes an integer matrix by unimodular row and
  column operations, tracking the column transform and its inverse.
* :func:`howell_form` computes the canonical echelon basis of a row span over
  the chain ring ``Z/p^E``.  Its rows have strictly increasing pivot columns,
  pivots of the form ``p^k``, entries above a pivot reduced below it, and the
  Howell property (every span element vanishing on the first ``j`` columns is a
  combination of the rows pivoting at ``j`` or later), so membership by
  back-substitution is complete and equal spans give equal forms.
"""

from __future__ import annotations

from dataclasses import dataclass

__all__ = ["SmithForm", "smith_form", "howell_form", "valuation", "reduce_by_howell"]


def valuation(x: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if x == 0:
        raise ValueError("valuation of zero")
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


@dataclass(frozen=True)
class SmithForm:
    diagonal: tuple  # nonnegative, each dividing the next; length = min(rows, cols)
    V: list  # cols x cols, A @ V has the diagonal shape after row operations
    Vinv: list


def smith_form(A: list[list[int]], ncols: int | None = None) -> SmithForm:
    """Smith normal form ``U A V = D`` returning ``D``'s diagonal, ``V`` and ``V^-1``.

    Row operations are not recorded.
    """
    m = len(A)
    n = ncols if ncols is not None else (len(A[0]) if A else 0)
    D = [list(r) for r in A]
    V = [[int(i == j) for j in range(n)] for i in range(n)]
    Vinv = [[int(i == j) for j in range(n)] for i in range(n)]

    def col_swap(i, j):
        for r in D:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]
        Vinv[i], Vinv[j] = Vinv[j], Vinv[i]

    def col_sub(j, t, q):
        # column j -= q * column t
        if not q:
            return
        for r in D:
            if r[t]:
                r[j] -= q * r[t]
        for r in V:
            if r[t]:
                r[j] -= q * r[t]
        rj, rt = Vinv[j], Vinv[t]
        for k in range(n):
            if rj[k]:
                rt[k] += q * rj[k]

    def col_neg(j):
        for r in D:
            r[j] = -r[j]
        for r in V:
            r[j] = -r[j]
        Vinv[j] = [-x for x in Vinv[j]]

    t = 0
    while t < min(m, n):
        # smallest nonzero entry of the trailing block
        best = None
        for i in range(t, m):
            row = D[i]
            for j in range(t, n):
                x = row[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        D[t], D[i] = D[i], D[t]
        if j != t:
            col_swap(t, j)
        while True:
            piv = D[t][t]
            done = True
            for i in range(t + 1, m):
                x = D[i][t]
                if x:
                    q = x // piv
                    if q:
                        Dt, Di = D[t], D[i]
                        for k in range(t, n):
                            if Dt[k]:
                                Di[k] -= q * Dt[k]
                    if D[i][t]:
                        done = False
            for j in range(t + 1, n):
                x = D[t][j]
                if x:
                    col_sub(j, t, x // piv)
                    if D[t][j]:
                        done = False
            if done:
                # divisibility of the trailing block by the pivot
                bad = None
                for i in range(t + 1, m):
                    if any(D[i][k] % piv for k in range(t + 1, n)):
                        bad = i
                        break
                if bad is None:
                    break
                Dt, Db = D[t], D[bad]
                for k in range(t, n):
                    Dt[k] += Db[k]
                continue
            # move the smallest entry of row/column t to the pivot position
            best = (abs(piv), t, t)
            for i in range(t + 1, m):
                if D[i][t] and abs(D[i][t]) < best[0]:
                    best = (abs(D[i][t]), i, t)
            for j in range(t + 1, n):
                if D[t][j] and abs(D[t][j]) < best[0]:
                    best = (abs(D[t][j]), t, j)
            _, i, j = best
            if i != t:
                D[t], D[i] = D[i], D[t]
            if j != t:
                col_swap(t, j)
        if D[t][t] < 0:
            col_neg(t)
        t += 1
    diagonal = tuple(D[k][k] if k < m else 0 for k in range(min(m, n)))
    return SmithForm(diagonal, V, Vinv)


def howell_form(rows, p: int, E: int, ncols: int) -> tuple[tuple[int, ...], ...]:
    """Canonical Howell basis of the row span of ``rows`` over ``Z/p^E``."""
    N = p**E
    work = []
    for r in rows:
        r = [x % N for x in r]
        if any(r):
            work.append(r)
    basis: list[tuple[int, list[int]]] = []
    for j in range(ncols):
        if not work:
            break
        best = -1
        bestv = E
        for idx, r in enumerate(work):
            x = r[j]
            if x:
                v = 0
                while x % p == 0:
                    x //= p
                    v += 1
                if v < bestv:
                    best, bestv = idx, v
                    if v == 0:
                        break
        if best < 0:
            continue
        piv = work.pop(best)
        pk = p**bestv
        u = piv[j] // pk
        if u != 1:
            inv = pow(u, -1, N)
            piv = [x * inv % N for x in piv]
        new = []
        for r in work:
            x = r[j]
            if x:
                q = x // pk
                r = [(a - q * b) % N for a, b in zip(r, piv)]
            if any(r):
                new.append(r)
        if bestv:
            ann = p ** (E - bestv)
            extra = [x * ann % N for x in piv]
            if any(extra):
                new.append(extra)
        work = new
        basis.append((j, piv))
    for i in range(len(basis)):
        j, piv = basis[i]
        pk = piv[j]
        for h in range(i):
            jh, row = basis[h]
            q = row[j] // pk
            if q:
                basis[h] = (jh, [(a - q * b) % N for a, b in zip(row, piv)])
    return tuple(tuple(r) for _, r in basis)


def pivot_column(row) -> int:
    for j, x in enumerate(row):
        if x:
            return j
    return -1


def reduce_by_howell(basis, vec, N: int):
    """Reduce ``vec`` against a Howell basis; returns the remainder (zero iff member)."""
    v = [x % N for x in vec]
    for row in basis:
        j = pivot_column(row)
        for c in range(j):
            if v[c]:
                return v
        if v[j]:
            pk = row[j]
            if v[j] % pk:
                return v
            q = v[j] // pk
            v = [(a - q * b) % N for a, b in zip(v, row)]
    return v
