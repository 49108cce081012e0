"""Dense two-phase simplex over Fractions with Bland's rule.

Small and exact; used as the oracle for the parametric solver and for
interior checks on parameter regions.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


@dataclass
class LPResult:
    status: str  # "optimal", "infeasible" or "unbounded"
    value: Fraction | None = None
    x: list | None = None


def _pivot(t, basis, r, c):
    row = t[r]
    inv = 1 / row[c]
    if inv != 1:
        t[r] = row = [v * inv for v in row]
    for i, other in enumerate(t):
        if i != r:
            f = other[c]
            if f:
                t[i] = [a - f * b for a, b in zip(other, row)]
    basis[r] = c


def _run(t, basis, obj_row, allowed):
    """Maximise; row obj_row holds reduced costs (negative = improving)."""
    m = len(t)
    while True:
        z = t[obj_row]
        enter = next((j for j in allowed if z[j] < 0), None)
        if enter is None:
            return True
        best = None
        for i in range(m):
            if i == obj_row:
                continue
            a = t[i][enter]
            if a > 0:
                ratio = t[i][-1] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            return False
        _pivot(t, basis, best[1], enter)


def maximize(c, A_ub=(), b_ub=(), A_eq=(), b_eq=(), free: bool = False) -> LPResult:
    """Maximise c.x subject to A_ub x <= b_ub, A_eq x = b_eq and x >= 0.

    With free=True the variables are unrestricted in sign.
    """
    c = [Fraction(v) for v in c]
    A_ub = [[Fraction(v) for v in row] for row in A_ub]
    A_eq = [[Fraction(v) for v in row] for row in A_eq]
    b_ub = [Fraction(v) for v in b_ub]
    b_eq = [Fraction(v) for v in b_eq]
    n0 = len(c)
    if free:
        c = c + [-v for v in c]
        A_ub = [row + [-v for v in row] for row in A_ub]
        A_eq = [row + [-v for v in row] for row in A_eq]
    n = len(c)
    rows, rhs, slack_sign = [], [], []
    for row, b in zip(A_ub, b_ub):
        rows.append(row)
        rhs.append(b)
        slack_sign.append(1)
    for row, b in zip(A_eq, b_eq):
        rows.append(row)
        rhs.append(b)
        slack_sign.append(0)
    m = len(rows)
    nslack = sum(1 for s in slack_sign if s)
    # columns: x (n), slacks (nslack), artificials (m at most)
    art_rows = []
    width = n + nslack
    slack_col = []
    k = 0
    for s in slack_sign:
        if s:
            slack_col.append(n + k)
            k += 1
        else:
            slack_col.append(None)
    for i in range(m):
        if slack_col[i] is None or rhs[i] < 0:
            art_rows.append(i)
    ncols = width + len(art_rows)
    t = []
    basis = []
    art_index = {}
    for i in range(m):
        line = [Fraction(0)] * (ncols + 1)
        sign = -1 if rhs[i] < 0 else 1
        for j, v in enumerate(rows[i]):
            line[j] = sign * v
        if slack_col[i] is not None:
            line[slack_col[i]] = Fraction(sign)
        line[-1] = sign * rhs[i]
        if i in art_rows:
            col = width + len(art_index)
            art_index[i] = col
            line[col] = Fraction(1)
            basis.append(col)
        else:
            basis.append(slack_col[i])
        t.append(line)
    # phase 1: maximise -sum(artificials)
    if art_rows:
        z = [Fraction(0)] * (ncols + 1)
        for i in art_rows:
            z = [a - b for a, b in zip(z, t[i])]
        for col in art_index.values():
            z[col] = Fraction(0)
        t.append(z)
        _run(t, basis, m, range(ncols))
        if t[m][-1] != 0:
            return LPResult("infeasible")
        t.pop()
        art_cols = set(art_index.values())
        drop = []
        for i in range(m):
            if basis[i] in art_cols:
                j = next((j for j in range(width) if t[i][j] != 0), None)
                if j is None:
                    drop.append(i)
                else:
                    _pivot(t, basis, i, j)
        for i in reversed(drop):
            del t[i]
            del basis[i]
        t = [row[:width] + [row[-1]] for row in t]
        m = len(t)
    else:
        t = [row[:width] + [row[-1]] for row in t]
    z = [Fraction(0)] * (width + 1)
    for j in range(n):
        z[j] = -c[j]
    for i in range(m):
        cb = c[basis[i]] if basis[i] < n else Fraction(0)
        if cb:
            z = [a + cb * b for a, b in zip(z, t[i])]
    t.append(z)
    if not _run(t, basis, m, range(width)):
        return LPResult("unbounded")
    x = [Fraction(0)] * n
    for i in range(m):
        if basis[i] < n:
            x[basis[i]] = t[i][-1]
    if free:
        x = [x[j] - x[j + n0] for j in range(n0)]
    return LPResult("optimal", t[m][-1], x)


def feasible(A_ub=(), b_ub=(), A_eq=(), b_eq=(), nvars: int | None = None, free: bool = True) -> bool:
    if nvars is None:
        nvars = len(A_ub[0]) if A_ub else len(A_eq[0])
    return maximize([0] * nvars, A_ub, b_ub, A_eq, b_eq, free=free).status != "infeasible"
