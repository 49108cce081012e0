"""Counting integer points at concrete parameters, dimensions and growth."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from itertools import product
from math import log

from .. import linalg
from . import system as sy
from .sets import IntSet, ParamSpace

DEFAULT_B = 100
FIT_BASE = 60
FIT_GAP = 40
FIT_STEP = 6


def concrete_systems(systems, params: ParamSpace, binding: dict):
    """Substitute every parameter; returns parameter-free systems."""
    out = []
    for s in systems:
        dim = s.nvars - len(params)
        try:
            values = {dim + k: int(binding[n]) for k, n in enumerate(params.names)}
        except KeyError as e:
            raise ValueError(f"parameter {e.args[0]} is not bound") from None
        t = sy.substitute(s, values)
        if t is not None:
            out.append(t)
    return out


def card_at(s: IntSet, binding: dict) -> int:
    """Exact number of integer points of s at the binding."""
    return sy.count_union(concrete_systems(s.systems, s.params, binding))


def points_at(s: IntSet, binding: dict) -> set:
    pts = set()
    for t in concrete_systems(s.systems, s.params, binding):
        pts.update(sy.Enumerator(t).points())
    return pts


def _probe_bindings(params: ParamSpace, B: int):
    names = params.names
    yield {n: B for n in names}
    yield {n: B + 37 * k for k, n in enumerate(names)}
    yield {n: B + 37 * (len(names) - k) for k, n in enumerate(names)}
    yield {n: 10 * B for n in names}


def _hull_dim(t: sy.System) -> int | None:
    if sy.Enumerator(t).first() is None:
        return None
    eqs = [list(r[:-1]) for r in t.eqs]
    for r in t.ineqs:
        tighter = r[:-1] + (r[-1] - 1,)
        if sy.Enumerator(t.add(ineqs=[tighter])).first() is None:
            eqs.append(list(r[:-1]))
    return t.nvars - linalg.rank(eqs)


def dim_of(s: IntSet, method: str = "hull", B: int = DEFAULT_B, binding: dict | None = None) -> int:
    """Dimension of s at a large parameter binding.

    "hull" is the rank of the affine hull of the integer points; "count"
    rounds log_B of the point count with every parameter set to B.
    """
    if method == "count":
        c = card_at(s, binding or {n: B for n in s.params.names})
        if c == 0:
            raise ValueError("set is empty at the probe binding")
        return round(log(c) / log(B))
    probes = [binding] if binding else _probe_bindings(s.params, B)
    for b in probes:
        dims = [_hull_dim(t) for t in concrete_systems(s.systems, s.params, b)]
        dims = [d for d in dims if d is not None]
        if dims:
            return max(dims)
    raise ValueError("set is empty for all probed bindings")


@dataclass(frozen=True)
class Growth:
    """Leading terms of a point count: a sum of monomials over parameters."""
    params: ParamSpace
    terms: tuple  # exponent tuples aligned with params

    def __str__(self):
        return " + ".join(_mono_str(self.params, e) for e in self.terms) or "0"

    @property
    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def as_dicts(self):
        return [{n: k for n, k in zip(self.params.names, e) if k} for e in self.terms]

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)


def _mono_str(params, e):
    parts = []
    for n, k in zip(params.names, e):
        if k == 1:
            parts.append(n)
        elif k:
            parts.append(f"{n}^{k}")
    return "*".join(parts) or "1"


def _relevant_params(s: IntSet):
    rel = set()
    for t in s.systems:
        for r, _ in t.rows():
            for k in range(len(s.params)):
                if r[s.dim + k]:
                    rel.add(k)
    return sorted(rel)


def _dominated(a, b):
    return a != b and all(x <= y for x, y in zip(a, b))


def count_polynomial(s: IntSet):
    """Exact polynomial fit of the point count in its large-parameter chamber.

    Returns a dict mapping exponent tuples to Fraction coefficients.  The fit
    is checked at one extra point; a mismatch means the growth is not
    polynomial along the probed lattice and raises ValueError.
    """
    np_ = len(s.params)
    base = [FIT_BASE + FIT_GAP * k for k in range(np_)]
    rel = _relevant_params(s)
    cache = {}

    def count(offsets):
        vals = tuple(base[k] + FIT_STEP * offsets.get(k, 0) for k in range(np_))
        if vals not in cache:
            cache[vals] = card_at(s, dict(zip(s.params.names, vals)))
        return cache[vals]

    D = s.dim
    degrees = {}
    for k in rel:
        seq = [count({k: t}) for t in range(D + 2)]
        diffs = [seq]
        while len(diffs[-1]) > 1:
            prev = diffs[-1]
            diffs.append([b - a for a, b in zip(prev, prev[1:])])
        if any(diffs[D + 1]):
            raise ValueError("non-polynomial growth")
        degrees[k] = max((o for o in range(D + 1) if any(diffs[o])), default=0)
    vary = [k for k in rel if degrees[k] > 0]
    exps = list(product(*[range(degrees[k] + 1) for k in vary]))
    rows, rhs = [], []
    for grid in exps:
        offs = dict(zip(vary, grid))
        vals = [base[k] + FIT_STEP * offs[k] for k in vary]
        rows.append([_monoval(vals, e) for e in exps])
        rhs.append(count(offs))
    coeffs = linalg.solve(rows, rhs) if exps else [Fraction(rhs[0])]
    # check one point outside the grid
    offs = {k: degrees[k] + 1 for k in vary}
    vals = [base[k] + FIT_STEP * offs[k] for k in vary]
    predicted = sum(c * _monoval(vals, e) for c, e in zip(coeffs, exps))
    if predicted != count(offs):
        raise ValueError("non-polynomial growth")
    poly = {}
    for c, e in zip(coeffs, exps):
        if c:
            full = [0] * np_
            for k, x in zip(vary, e):
                full[k] = x
            poly[tuple(full)] = c
    return poly


def _monoval(vals, e):
    v = Fraction(1)
    for x, k in zip(vals, e):
        v *= x ** k
    return v


@lru_cache(maxsize=4096)
def card_leading(s: IntSet) -> Growth:
    """Leading monomials of |s| (coefficients dropped)."""
    poly = count_polynomial(s)
    if not poly:
        raise ValueError("set is empty at large parameters")
    top = [e for e in poly if not any(_dominated(e, f) for f in poly)]
    keep = sorted((e for e in top if poly[e] > 0), key=lambda e: (-sum(e), tuple(-x for x in e)))
    if not keep:
        raise ValueError("no positive leading term")
    return Growth(s.params, tuple(keep))
