"""Integer constraint systems: the arithmetic underneath sets and relations.

A system has ``nvars`` columns plus a constant column.  Rows are integer
tuples ``(a_0, ..., a_{n-1}, c)`` read as ``a.x + c >= 0`` (inequalities)
or ``a.x + c = 0`` (equalities).  Every routine here assumes the points of
interest are integral, so inequalities are tightened by their gcd.  Rational
Fourier-Motzkin with that tightening keeps every integer point, which is
the sound direction for all uses in this package.
"""
from __future__ import annotations

from math import gcd
from functools import reduce
from itertools import product


class Unbounded(ValueError):
    pass


def _gcd_of(vals):
    return reduce(gcd, (abs(v) for v in vals), 0)


def _norm_eq(row):
    g = _gcd_of(row[:-1])
    if g == 0:
        return None if row[-1] == 0 else False
    if row[-1] % g:
        return False
    if g > 1:
        row = tuple(v // g for v in row)
    first = next(v for v in row[:-1] if v)
    if first < 0:
        row = tuple(-v for v in row)
    return row


def _norm_ineq(row):
    g = _gcd_of(row[:-1])
    if g == 0:
        return None if row[-1] >= 0 else False
    if g > 1:
        row = tuple(v // g for v in row[:-1]) + (row[-1] // g,)
    return row


class System:
    """Immutable conjunction of integer affine constraints."""

    __slots__ = ("nvars", "eqs", "ineqs")

    def __init__(self, nvars: int, eqs=(), ineqs=()):
        self.nvars = nvars
        self.eqs = tuple(eqs)
        self.ineqs = tuple(ineqs)

    def __repr__(self):
        return f"System({self.nvars}, eqs={self.eqs}, ineqs={self.ineqs})"

    def __eq__(self, other):
        return (isinstance(other, System) and self.nvars == other.nvars
                and set(self.eqs) == set(other.eqs) and set(self.ineqs) == set(other.ineqs))

    def __hash__(self):
        return hash((self.nvars, frozenset(self.eqs), frozenset(self.ineqs)))

    def rows(self):
        for r in self.eqs:
            yield r, True
        for r in self.ineqs:
            yield r, False

    def conj(self, other: "System") -> "System":
        return System(self.nvars, self.eqs + other.eqs, self.ineqs + other.ineqs)

    def add(self, eqs=(), ineqs=()) -> "System":
        return System(self.nvars, self.eqs + tuple(eqs), self.ineqs + tuple(ineqs))


def normalize(s: System) -> System | None:
    """Canonical form, or None when the system is trivially infeasible."""
    eqs = []
    seen_eq = set()
    for r in s.eqs:
        r = _norm_eq(tuple(r))
        if r is False:
            return None
        if r is None or r in seen_eq:
            continue
        seen_eq.add(r)
        eqs.append(r)
    best: dict = {}
    for r in s.ineqs:
        r = _norm_ineq(tuple(r))
        if r is False:
            return None
        if r is None:
            continue
        key = r[:-1]
        if key not in best or r[-1] < best[key]:
            best[key] = r[-1]
    # inequalities parallel to an equality are either implied or infeasible
    for e in eqs:
        a, c = e[:-1], e[-1]
        neg = tuple(-v for v in a)
        if a in best:
            if best.pop(a) - c < 0:
                return None
        if neg in best:
            if best.pop(neg) + c < 0:
                return None
    ineqs = []
    done = set()
    for key, c in best.items():
        if key in done:
            continue
        neg = tuple(-v for v in key)
        if neg in best:
            c2 = best[neg]
            if c + c2 < 0:
                return None
            if c + c2 == 0:
                r = _norm_eq(key + (c,))
                if r not in seen_eq:
                    seen_eq.add(r)
                    eqs.append(r)
                done.add(key)
                done.add(neg)
                continue
        ineqs.append(key + (c,))
    ineqs.sort()
    eqs.sort()
    return System(s.nvars, eqs, ineqs)


def eliminate(s: System, j: int) -> System | None:
    """Project out column j (the column stays, with zero coefficients)."""
    pivot = None
    for r in s.eqs:
        if r[j] and (pivot is None or abs(r[j]) < abs(pivot[j])):
            pivot = r
    if pivot is not None:
        a = pivot[j]
        sa = 1 if a > 0 else -1
        eqs, ineqs = [], []
        for r in s.eqs:
            if r is pivot:
                continue
            b = r[j]
            eqs.append(r if not b else tuple(a * x - b * y for x, y in zip(r, pivot)))
        for r in s.ineqs:
            b = r[j]
            if not b:
                ineqs.append(r)
            else:
                # |a| r - sign(a) b pivot keeps the inequality direction
                ineqs.append(tuple(sa * a * x - sa * b * y for x, y in zip(r, pivot)))
        return normalize(System(s.nvars, eqs, ineqs))
    pos, neg, rest = [], [], []
    for r in s.ineqs:
        if r[j] > 0:
            pos.append(r)
        elif r[j] < 0:
            neg.append(r)
        else:
            rest.append(r)
    for p in pos:
        for n in neg:
            a, b = p[j], -n[j]
            rest.append(tuple(b * x + a * y for x, y in zip(p, n)))
    return normalize(System(s.nvars, s.eqs, rest))


def _elim_cost(s: System, j: int) -> int:
    if any(r[j] for r in s.eqs):
        return -1
    p = sum(1 for r in s.ineqs if r[j] > 0)
    n = sum(1 for r in s.ineqs if r[j] < 0)
    return p * n - p - n


def eliminate_many(s: System | None, cols) -> System | None:
    cols = set(cols)
    while cols and s is not None:
        j = min(cols, key=lambda c: (_elim_cost(s, c), c))
        cols.discard(j)
        s = eliminate(s, j)
    return s


def drop_columns(s: System, cols) -> System:
    cols = set(cols)
    keep = [i for i in range(s.nvars) if i not in cols] + [s.nvars]
    for r, _ in s.rows():
        for c in cols:
            if r[c]:
                raise ValueError("column still in use")
    return System(len(keep) - 1,
                  [tuple(r[i] for i in keep) for r in s.eqs],
                  [tuple(r[i] for i in keep) for r in s.ineqs])


def project(s: System, cols) -> System | None:
    """Eliminate columns and remove them."""
    cols = sorted(set(cols))
    t = eliminate_many(normalize(s), cols)
    if t is None:
        return None
    return drop_columns(t, cols)


def is_empty(s: System) -> bool:
    """True only when the system has no integer point (sound, not complete)."""
    t = normalize(s)
    return eliminate_many(t, range(s.nvars)) is None


def substitute(s: System, values: dict) -> System | None:
    """Fix some columns to integers and remove them."""
    keep = [i for i in range(s.nvars) if i not in values]

    def sub(r):
        c = r[-1] + sum(r[i] * v for i, v in values.items())
        return tuple(r[i] for i in keep) + (c,)

    return normalize(System(len(keep), [sub(r) for r in s.eqs], [sub(r) for r in s.ineqs]))


def remap(s: System, nvars: int, mapping) -> System:
    """Move column i to column mapping[i] in a system with nvars columns."""

    def mv(r):
        out = [0] * (nvars + 1)
        for i, m in enumerate(mapping):
            out[m] += r[i]
        out[-1] = r[-1]
        return tuple(out)

    return System(nvars, [mv(r) for r in s.eqs], [mv(r) for r in s.ineqs])


def complement_rows(s: System):
    """Inequalities whose single negations partition the complement of s."""
    out = []
    for r in s.eqs:
        out.append(r)
        out.append(tuple(-v for v in r))
    out.extend(s.ineqs)
    return out


def negate(row):
    """Integer complement of a.x + c >= 0: -a.x - c - 1 >= 0."""
    return tuple(-v for v in row[:-1]) + (-row[-1] - 1,)


def subtract(a: System, b: System) -> list:
    """Exact integer difference a \\ b as disjoint systems."""
    pieces = []
    acc = a
    for r in complement_rows(b):
        cand = normalize(acc.add(ineqs=[negate(r)]))
        if cand is not None and not is_empty(cand):
            pieces.append(cand)
        acc = acc.add(ineqs=[r])
        if normalize(acc) is None:
            break
    return pieces


# ---- enumeration over parameter-free systems -------------------------------

class _Level:
    __slots__ = ("lower", "upper", "eqs")

    def __init__(self):
        self.lower = []
        self.upper = []
        self.eqs = []


def _floordiv(a, b):
    return a // b


def _ceildiv(a, b):
    return -((-a) // b)


class Enumerator:
    """Integer points of a parameter-free system, level by level.

    The system is projected once onto every prefix of its variables; each
    level then only evaluates bounds for its own variable.
    """

    def __init__(self, s: System):
        self.d = s.nvars
        self.empty = False
        self.levels = []
        s = normalize(s)
        if s is None:
            self.empty = True
            return
        chain = [None] * self.d
        cur = s
        for k in range(self.d - 1, -1, -1):
            chain[k] = cur
            if k > 0:
                cur = eliminate(cur, k)
                if cur is None:
                    self.empty = True
                    return
                cur = drop_columns(cur, [k])
        if self.d == 0:
            return
        # constraints on no variable at all
        base = eliminate(chain[0], 0)
        if base is None:
            self.empty = True
            return
        for k in range(self.d):
            lv = _Level()
            for r, is_eq in chain[k].rows():
                a = r[k]
                if not a:
                    continue
                rest = (r[:k], r[-1])
                if is_eq:
                    lv.eqs.append((a, rest))
                elif a > 0:
                    lv.lower.append((a, rest))
                else:
                    lv.upper.append((-a, rest))
            self.levels.append(lv)

    def _range(self, k, vals):
        lv = self.levels[k]
        lo = hi = None
        for a, (co, c) in lv.lower:
            v = c + sum(x * y for x, y in zip(co, vals))
            b = _ceildiv(-v, a)
            if lo is None or b > lo:
                lo = b
        for a, (co, c) in lv.upper:
            v = c + sum(x * y for x, y in zip(co, vals))
            b = _floordiv(v, a)
            if hi is None or b < hi:
                hi = b
        for a, (co, c) in lv.eqs:
            v = c + sum(x * y for x, y in zip(co, vals))
            if v % a:
                return 1, 0
            x = -v // a
            if lo is not None and x < lo or hi is not None and x > hi:
                return 1, 0
            return x, x
        if lo is None or hi is None:
            raise Unbounded("unbounded")
        return lo, hi

    def count(self) -> int:
        if self.empty:
            return 0
        if self.d == 0:
            return 1
        last = self.d - 1

        def rec(k, vals):
            lo, hi = self._range(k, vals)
            if hi < lo:
                return 0
            if k == last:
                return hi - lo + 1
            total = 0
            for x in range(lo, hi + 1):
                vals.append(x)
                total += rec(k + 1, vals)
                vals.pop()
            return total

        return rec(0, [])

    def points(self):
        if self.empty:
            return
        if self.d == 0:
            yield ()
            return

        def rec(k, vals):
            lo, hi = self._range(k, vals)
            for x in range(lo, hi + 1):
                vals.append(x)
                if k == self.d - 1:
                    yield tuple(vals)
                else:
                    yield from rec(k + 1, vals)
                vals.pop()

        yield from rec(0, [])

    def first(self):
        for p in self.points():
            return p
        return None


def count_union(systems) -> int:
    """Exact number of integer points in a union of parameter-free systems."""
    systems = [s for s in systems if s is not None]
    total = 0
    for i, s in enumerate(systems):
        parts = [s]
        for prev in systems[:i]:
            nxt = []
            for p in parts:
                nxt.extend(subtract(p, prev))
            parts = nxt
            if not parts:
                break
        total += sum(Enumerator(p).count() for p in parts)
    return total


def box_points(bounds):
    return product(*[range(lo, hi + 1) for lo, hi in bounds])
