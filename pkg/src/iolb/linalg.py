"""Exact rational linear algebra on small dense matrices.

Matrices are lists of rows; entries are anything Fraction() accepts.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from functools import reduce


def to_frac(m):
    return [[Fraction(x) for x in row] for row in m]


def rref(m):
    """Reduced row echelon form. Returns (rows, pivot_columns)."""
    a = to_frac(m)
    if not a:
        return [], []
    nrows, ncols = len(a), len(a[0])
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(nrows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return a[:r], pivots


def rank(m) -> int:
    if not m:
        return 0
    return len(rref(m)[1])


def nullspace(m, ncols: int | None = None):
    """Basis of {x : m x = 0}, one integer vector per free column."""
    if not m:
        n = ncols or 0
        return [[1 if i == j else 0 for i in range(n)] for j in range(n)]
    n = len(m[0])
    rows, pivots = rref(m)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for row, pc in zip(rows, pivots):
            v[pc] = -row[f]
        basis.append(integerize(v))
    return basis


def integerize(v):
    """Scale a rational vector to coprime integers (sign preserved)."""
    v = [Fraction(x) for x in v]
    den = reduce(lambda a, b: a * b // gcd(a, b), (x.denominator for x in v), 1)
    ints = [int(x * den) for x in v]
    g = reduce(gcd, (abs(x) for x in ints), 0)
    if g > 1:
        ints = [x // g for x in ints]
    return ints


def transpose(m):
    return [list(col) for col in zip(*m)]


def matmul(a, b):
    bt = transpose(b)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def matvec(a, v):
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def inverse(m):
    """Inverse of a square matrix, or None when singular."""
    n = len(m)
    aug = [list(row) + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(m)]
    rows, pivots = rref(aug)
    if pivots[:n] != list(range(n)) or len(rows) < n:
        return None
    return [row[n:] for row in rows]


def det(m) -> Fraction:
    a = to_frac(m)
    n = len(a)
    d = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            d = -d
        d *= a[c][c]
        for i in range(c + 1, n):
            if a[i][c] != 0:
                f = a[i][c] / a[c][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return d


def solve(a, b):
    """Unique solution of the square system a x = b, or None."""
    inv = inverse(a)
    if inv is None:
        return None
    return matvec(inv, [Fraction(x) for x in b])


def in_span(vectors, v) -> bool:
    if not any(v):
        return True
    return rank(list(vectors) + [list(v)]) == rank(vectors)


def row_basis(vectors):
    """Canonical basis (integer rows of the RREF) of the span of vectors."""
    if not vectors:
        return []
    rows, _ = rref(vectors)
    return [integerize(r) for r in rows]


def orthogonal_complement(vectors, n: int):
    if not vectors:
        return [[1 if i == j else 0 for i in range(n)] for j in range(n)]
    return nullspace(vectors, n)
