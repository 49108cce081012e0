"""Exponent linear programs and their parametric solution.

Given a domain D and a compatible set K of projection kernels, the program
maximizes Theta = sum(x_i) over one exponent per base vector, subject to
one unit row per kernel and one row per proper subset of the base bounding
the exponents by log_S of the size of the matching projection of D.  The
right-hand sides are affine in log_S(.) symbols, and the solution is a list
of cases over those symbols.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd, lcm
from functools import reduce

from . import linalg, lp
from .asymbound import (CACHE, AsymBound, Case, Cond, LinLog, LogTerm, Monomial, Poly,
                        reduce_region, simplify)
from .polyset import IntSet, Subspace, card_leading, change_basis, linear_image, project_onto

MAX_LOGTERMS = 4
MAX_DIM = 4


class ParametricArityError(ValueError):
    pass


def _primitive(v):
    v = [Fraction(x) for x in v]
    den = reduce(lcm, (x.denominator for x in v), 1)
    w = [int(x * den) for x in v]
    g = reduce(gcd, (abs(x) for x in w), 0) or 1
    w = [x // g for x in w]
    first = next((x for x in w if x), 0)
    return tuple(-x for x in w) if first < 0 else tuple(w)


def base(K, n: int):
    """A basis of Q^n such that every k in K is spanned by some of its vectors.

    Vectors come from intersections of members of K, largest families
    first, and are ordered lexicographically (descending) so that axis
    directions keep their natural order.  Returns None when no such basis
    is found.
    """
    K = list(K)
    chosen = []

    def span_of(vs):
        return Subspace.span(vs, n) if vs else Subspace(n)

    families = []
    for size in range(len(K), -1, -1):
        for fam in combinations(range(len(K)), size):
            families.append(fam)
    for fam in families:
        space = Subspace.span([[1 if i == j else 0 for i in range(n)] for j in range(n)], n)
        for i in fam:
            space = space.intersect(K[i])
        if not space.dim:
            continue
        inside = [v for v in chosen if space.contains(v)]
        for b in space.basis:
            cur = span_of(inside)
            if not cur.contains(b):
                v = _primitive(b)
                inside.append(v)
                chosen.append(v)
    if len(chosen) != n:
        return None
    for k in K:
        if sum(1 for v in chosen if k.contains(v)) != k.dim:
            return None
    return sorted(chosen, key=lambda v: tuple(-x for x in v))


def growth_to_linlog(g) -> LinLog:
    """log_S of a leading-term sum: split a single monomial into parameter logs."""
    monos = [Monomial.of(d) for d in g.as_dicts()]
    if len(monos) == 1:
        coeffs = {}
        for name, e in monos[0].exps:
            t = LogTerm(Poly.of([Monomial.of({name: 1})]))
            coeffs[t] = coeffs.get(t, 0) + e
        return LinLog.of(coeffs)
    return LinLog.of({LogTerm(Poly.of(monos)): 1})


def growth_monomials(g):
    return [Monomial.of(d) for d in g.as_dicts()]


@dataclass(frozen=True)
class Row:
    support: tuple   # variable indices with coefficient 1
    rhs: LinLog
    kind: str        # "unit", "degenerate" or "full"

    def render(self) -> str:
        lhs = " + ".join(f"x{i + 1}" for i in self.support)
        return f"{lhs} <= {_rhs_str(self.rhs)}"


def _rhs_str(f: LinLog) -> str:
    return str(f)


@dataclass(frozen=True)
class ExpLP:
    basis: tuple      # base vectors, one exponent each
    rows: tuple       # Rows
    kernels: tuple = ()

    @property
    def nvars(self) -> int:
        return len(self.basis)

    @property
    def logterms(self):
        return sorted({t for r in self.rows for t, _ in r.rhs.coeffs}, key=str)

    def render(self) -> str:
        obj = " + ".join(f"x{i + 1}" for i in range(self.nvars))
        return "\n".join([f"maximize {obj}"] + ["  " + r.render() for r in self.rows])

    def row_set(self, kind=None):
        return {(r.support, r.rhs) for r in self.rows if kind is None or r.kind == kind}


def build_lp(D: IntSet, K, degenerate: bool = True) -> ExpLP:
    """Exponent LP for domain D and kernels K (Subspaces of D's space)."""
    n = D.dim
    if n > MAX_DIM:
        raise ValueError(f"dimension {n} exceeds the supported maximum of {MAX_DIM}")
    b = base(K, n)
    if b is None:
        raise ValueError("kernels have no common adapted basis")
    rows = []
    for k in K:
        support = tuple(i for i, v in enumerate(b) if not k.contains(v))
        if support:
            rows.append(Row(support, LinLog.of(const=1), "unit"))
    covered = {i for r in rows for i in r.support}
    if degenerate or len(covered) < n:
        M = [[b[j][i] for j in range(n)] for i in range(n)]
        Dp = change_basis(D, M)
        subsets = [s for size in range(1, n) for s in combinations(range(n), size)] if degenerate else []
        full_needed = len(covered | {i for s in subsets for i in s}) < n
        if full_needed:
            subsets.append(tuple(range(n)))
        for s in subsets:
            g = card_leading(project_onto(Dp, s))
            rows.append(Row(s, growth_to_linlog(g), "full" if len(s) == n else "degenerate"))
    return ExpLP(tuple(b), tuple(rows), tuple(K))


# ---- parametric solution -----------------------------------------------------------

@dataclass(frozen=True)
class PLPCase:
    region: tuple    # Conds
    x: tuple         # LinLog per variable
    theta: LinLog

    def assignment_str(self) -> str:
        groups = {}
        for i, v in enumerate(self.x):
            groups.setdefault(v, []).append(f"x{i + 1}")
        parts = [" = ".join(names) + " = " + _rhs_str(v) for v, names in groups.items()]
        return ", ".join(parts)


@dataclass(frozen=True)
class PiecewiseSolution:
    cases: tuple

    def render(self) -> str:
        if len(self.cases) == 1 and not self.cases[0].region:
            return self.cases[0].assignment_str()
        out = []
        for k, c in enumerate(self.cases):
            last = k == len(self.cases) - 1
            cond = " and ".join(str(r) for r in c.region)
            if k == 0:
                out.append(f"if {cond} then {c.assignment_str()}")
            elif last:
                out.append(f"else {c.assignment_str()}")
            else:
                out.append(f"else if {cond} then {c.assignment_str()}")
        return "\n".join(out)

    def case_for(self, values: dict) -> PLPCase:
        for c in self.cases:
            if all(r.holds(values, 1e-12) for r in c.region):
                return c
        raise ValueError("values outside every case")


def _normalize_cond(f: LinLog) -> LinLog:
    vals = [v for _, v in f.coeffs] + [f.const]
    den = reduce(lcm, (v.denominator for v in vals), 1)
    ints = [int(v * den) for v in vals]
    g = reduce(gcd, (abs(v) for v in ints), 0) or 1
    return f.scale(Fraction(den, g))


def _interior(conds, terms) -> bool:
    """Nonempty interior of {conds} within the nonnegative orthant."""
    n = len(terms)
    A, bb = [], []
    for c in conds:
        d = c.form.as_dict
        A.append([-d.get(t, 0) for t in terms] + [1])
        bb.append(c.form.const)
    for i in range(n):
        A.append([-1 if j == i else 0 for j in range(n)] + [1])
        bb.append(0)
    A.append([0] * n + [1])
    bb.append(1)
    res = lp.maximize([0] * n + [1], A, bb)
    return res.status == "optimal" and res.value > 0


def solve_plp(p: ExpLP) -> PiecewiseSolution:
    """Exact parametric optimum by enumerating dual-feasible bases.

    A basis whose reduced costs are all nonpositive is optimal wherever its
    primal solution is feasible; that set is a polyhedron in the log
    symbols.  Bases with full-dimensional regions are kept and ordered with
    the large-parameter case first.
    """
    terms = p.logterms
    if len(terms) > MAX_LOGTERMS:
        raise ParametricArityError("parametric arity exceeded")
    n, m = p.nvars, len(p.rows)
    A = [[Fraction(1 if i in r.support else 0) for i in range(n)] for r in p.rows]
    rhs = [r.rhs for r in p.rows]
    seen_regions = set()
    cases = []
    # a basis is fixed by its basic variables J and the tight rows R, |J| = |R|
    for size in range(n + 1):
        for J in combinations(range(n), size):
            for R in combinations(range(m), size):
                M = [[A[r][j] for j in J] for r in R]
                Minv = linalg.inverse(M) if size else []
                if Minv is None:
                    continue
                y = [sum(Minv[i][r] for i in range(size)) for r in range(size)]
                if any(v < 0 for v in y):
                    continue
                if any(sum(y[t] * A[r][j] for t, r in enumerate(R)) < 1
                       for j in range(n) if j not in J):
                    continue
                xj = []
                for i in range(size):
                    f = LinLog.of()
                    for t, r in enumerate(R):
                        if Minv[i][t]:
                            f = f + rhs[r].scale(Minv[i][t])
                    xj.append(f)
                slack = []
                for r in range(m):
                    if r in R:
                        continue
                    f = rhs[r]
                    for i, j in enumerate(J):
                        if A[r][j]:
                            f = f - xj[i].scale(A[r][j])
                    slack.append(f)
                conds = []
                feasible = True
                for f in xj + slack:
                    if f.is_const():
                        if f.const < 0:
                            feasible = False
                            break
                        continue
                    if f.const >= 0 and all(v >= 0 for _, v in f.coeffs):
                        continue
                    conds.append(Cond(_normalize_cond(f)))
                if not feasible or not _interior(conds, terms):
                    continue
                region = reduce_region(conds)
                key = frozenset(region)
                if key in seen_regions:
                    continue
                seen_regions.add(key)
                x = [LinLog.of() for _ in range(n)]
                for i, j in enumerate(J):
                    x[j] = xj[i]
                theta = LinLog.of()
                for v in x:
                    theta = theta + v
                cases.append(PLPCase(region, tuple(x), theta))
    big = {t: 10.0 for t in terms}

    def order(c):
        inside = all(r.holds(big) for r in c.region)
        return (not inside, len(c.theta.coeffs), len(c.region), str(c.theta), [str(r) for r in c.region])

    cases.sort(key=order)
    # a later case excludes the boundary it shares with an earlier one
    fixed = []
    for k, c in enumerate(cases):
        earlier = {r.form for e in cases[:k] for r in e.region}
        region = tuple(Cond(r.form, True) if r.form.scale(-1) in earlier else r for r in c.region)
        fixed.append(PLPCase(region, c.x, c.theta))
    return PiecewiseSolution(tuple(fixed))


def lp_value_at(p: ExpLP, values: dict) -> Fraction:
    """Plain simplex optimum with the log symbols fixed to values."""
    A = [[Fraction(1 if i in r.support else 0) for i in range(p.nvars)] for r in p.rows]
    b = [Fraction(r.rhs.const) + sum(Fraction(c) * Fraction(values[t]) for t, c in r.rhs.coeffs)
         for r in p.rows]
    res = lp.maximize([1] * p.nvars, A, b)
    if res.status != "optimal":
        raise ValueError(f"LP is {res.status}")
    return res.value


def verify_numeric(p: ExpLP, sol: PiecewiseSolution, values: dict, tol: float = 1e-9) -> bool:
    """Case value of sol at values equals the simplex optimum."""
    if any(v < 0 for v in values.values()):
        raise ValueError("log symbols must be nonnegative")
    case = sol.case_for({t: float(v) for t, v in values.items()})
    got = float(case.theta.const) + sum(float(c) * float(values[t]) for t, c in case.theta.coeffs)
    want = float(lp_value_at(p, values))
    if abs(got - want) > tol:
        return False
    for r in p.rows:
        lhs = sum(float(case.x[i].value({t: float(v) for t, v in values.items()})) for i in r.support)
        if lhs > r.rhs.value({t: float(v) for t, v in values.items()}) + tol:
            return False
    return True


# ---- bound assembly --------------------------------------------------------------------

def tag_growth(D: IntSet, k: Subspace):
    """Leading terms of the projection of D onto the orthogonal complement of k."""
    comp = k.complement()
    if not comp.dim:
        return []
    g = card_leading(linear_image(D, [list(v) for v in comp.basis]))
    return growth_monomials(g)


def assemble_bound(D: IntSet, K, sol: PiecewiseSolution, tagged=None) -> AsymBound:
    """Omega(|D| * S / S^Theta) minus the tag count, per case.

    tagged[j] says whether the frontier for K[j] is a set of relabeled
    sources whose one-time loads are subtracted.  A case in which S^Theta
    already covers |D| gives the zero bound.
    """
    K = list(K)
    if tagged is None:
        tagged = [True] * len(K)
    size = growth_monomials(card_leading(D))
    F = []
    for k, t in zip(K, tagged):
        if t:
            F.extend(tag_growth(D, k))
    cases = []
    for c in sol.cases:
        U = c.theta.as_monomial_of_S()
        if len(size) == 1 and U == size[0]:
            cases.append(Case(c.region))
            continue
        pos = frozenset(m * Monomial.of({CACHE: 1}) * U.power(-1) for m in size)
        cases.append(Case(c.region, pos, (frozenset(F),) if F else ()))
    return simplify(AsymBound(tuple(cases)))
