"""Asymptotic lower-bound expressions in the problem parameters and S.

A bound is a list of cases.  Each case has a region (a conjunction of
affine conditions over log_S(.) symbols), a set of positive monomials and
groups of subtracted monomials, read as Omega(sum(pos) - sum(neg)).
Coefficients are always 1.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import log

from . import lp

CACHE = "S"


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class Poly:
    """Sum of coefficient-1 monomials over parameters, such as N + T."""
    terms: tuple  # Monomials without S

    def __str__(self):
        return " + ".join(str(m) for m in self.terms)

    def compact(self) -> str:
        return "+".join(str(m) for m in self.terms)

    def eval(self, binding) -> float:
        return sum(m.eval(binding) for m in self.terms)

    @classmethod
    def of(cls, monos) -> "Poly":
        return cls(tuple(sorted(set(monos), key=Monomial.sort_key)))


def _key_sort(k):
    if isinstance(k, Poly):
        return (1, str(k))
    return (2 if k == CACHE else 0, k)


@dataclass(frozen=True)
class Monomial:
    """Product of symbols raised to rational powers.

    Symbols are parameter names, the cache size S, or a Poly standing for a
    sum that cannot be split (for example (N + T)^-2).
    """
    exps: tuple = ()  # ((symbol, Fraction), ...) sorted, no zeros

    @classmethod
    def of(cls, mapping=None, **kw) -> "Monomial":
        d = {}
        for k, v in list((mapping or {}).items()) + list(kw.items()):
            v = _frac(v)
            if v:
                d[k] = d.get(k, 0) + v
        return cls(tuple(sorted(((k, v) for k, v in d.items() if v), key=lambda kv: _key_sort(kv[0]))))

    @property
    def as_dict(self) -> dict:
        return dict(self.exps)

    def __mul__(self, o: "Monomial") -> "Monomial":
        d = self.as_dict
        for k, v in o.exps:
            d[k] = d.get(k, 0) + v
        return Monomial.of(d)

    def power(self, e) -> "Monomial":
        return Monomial.of({k: v * _frac(e) for k, v in self.exps})

    def exponent(self, k) -> Fraction:
        return self.as_dict.get(k, Fraction(0))

    def dominated_by(self, o: "Monomial") -> bool:
        """Componentwise <= on exponents (all symbols, S included)."""
        keys = set(self.as_dict) | set(o.as_dict)
        return all(self.exponent(k) <= o.exponent(k) for k in keys)

    def eval(self, binding) -> float:
        v = 1.0
        for k, e in self.exps:
            base = k.eval(binding) if isinstance(k, Poly) else float(binding[k])
            v *= base ** float(e)
        return v

    def degree(self) -> Fraction:
        return sum((e for k, e in self.exps if k != CACHE), Fraction(0))

    def sort_key(self):
        return (-self.degree(), tuple((_key_sort(k), -e) for k, e in self.exps))

    def __str__(self):
        num, den = [], []
        for k, e in self.exps:
            if isinstance(k, Poly):
                name = f"({k})" if len(k.terms) > 1 else str(k)
            else:
                name = k
            (num if e > 0 else den).append(_power(name, abs(e)))
        s = "*".join(num) or "1"
        if den:
            s += "/" + (den[0] if len(den) == 1 else "(" + "*".join(den) + ")")
        return s


def _power(name, e: Fraction) -> str:
    if e == 1:
        return name
    if e == Fraction(1, 2):
        return f"sqrt({name})"
    if e.denominator == 1:
        return f"{name}^{e.numerator}"
    return f"{name}^({e.numerator}/{e.denominator})"


ONE = Monomial()


@dataclass(frozen=True)
class LogTerm:
    """The symbol log_S(arg)."""
    arg: Poly

    def __str__(self):
        return f"log_S({self.arg.compact()})"

    def value(self, binding) -> float:
        return log(self.arg.eval(binding)) / log(float(binding[CACHE]))


@dataclass(frozen=True)
class LinLog:
    """Affine form const + sum(coeff * log_S(arg))."""
    coeffs: tuple = ()  # ((LogTerm, Fraction), ...)
    const: Fraction = Fraction(0)

    @classmethod
    def of(cls, coeffs=None, const=0) -> "LinLog":
        d = {}
        for k, v in (coeffs or {}).items():
            d[k] = d.get(k, 0) + _frac(v)
        return cls(tuple(sorted(((k, v) for k, v in d.items() if v), key=lambda kv: str(kv[0]))),
                   _frac(const))

    @property
    def as_dict(self):
        return dict(self.coeffs)

    def __add__(self, o):
        d = self.as_dict
        for k, v in o.coeffs:
            d[k] = d.get(k, 0) + v
        return LinLog.of(d, self.const + o.const)

    def __sub__(self, o):
        return self + o.scale(-1)

    def scale(self, f):
        f = _frac(f)
        return LinLog.of({k: v * f for k, v in self.coeffs}, self.const * f)

    def is_const(self) -> bool:
        return not self.coeffs

    def value(self, values: dict) -> float:
        """values maps LogTerm -> float."""
        return float(self.const) + sum(float(v) * values[k] for k, v in self.coeffs)

    def as_monomial_of_S(self) -> Monomial:
        """S raised to this exponent, with log_S(a) turned into a power of a."""
        m = Monomial.of({CACHE: self.const})
        for t, c in self.coeffs:
            if len(t.arg.terms) == 1:
                m = m * t.arg.terms[0].power(c)
            else:
                m = m * Monomial.of({t.arg: c})
        return m

    def __str__(self):
        parts = []
        for t, c in self.coeffs:
            parts.append(_coef_str(c, str(t)))
        if self.const or not parts:
            parts.append(_num(self.const))
        s = " + ".join(parts)
        return s.replace("+ -", "- ")


def _num(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _coef_str(c: Fraction, name: str) -> str:
    if c == 1:
        return name
    if c == -1:
        return f"-{name}"
    return f"{_num(c)}*{name}"


@dataclass(frozen=True)
class Cond:
    """form >= 0, or form > 0 when strict."""
    form: LinLog
    strict: bool = False

    def holds(self, values: dict, tol: float = 1e-12) -> bool:
        v = self.form.value(values)
        return v > tol if self.strict else v >= -tol

    def negate(self) -> "Cond":
        return Cond(self.form.scale(-1), not self.strict)

    def __str__(self):
        f = self.form
        op = ">" if self.strict else ">="
        if f.coeffs and all(c < 0 for _, c in f.coeffs):
            f = f.scale(-1)
            op = "<" if self.strict else "<="
        lhs = LinLog(f.coeffs, Fraction(0))
        return f"{lhs} {op} {_num(-f.const)}"


def region_feasible(region) -> bool:
    """Whether the conjunction has a point with every log symbol >= 0."""
    terms = sorted({t for c in region for t, _ in c.form.coeffs}, key=str)
    if not region:
        return True
    n = len(terms)
    # variables: terms..., slack t; maximize t
    A, b = [], []
    for c in region:
        d = c.form.as_dict
        row = [Fraction(-d.get(t, 0)) for t in terms] + [Fraction(1 if c.strict else 0)]
        A.append(row)
        b.append(c.form.const)
    A.append([Fraction(0)] * n + [Fraction(1)])
    b.append(Fraction(1))
    res = lp.maximize([Fraction(0)] * n + [Fraction(1)], A, b)
    if res.status != "optimal":
        return False
    return res.value > 0 or not any(c.strict for c in region)


def reduce_region(region) -> tuple:
    """Drop conditions implied by the others (and the orthant)."""
    conds = list(dict.fromkeys(region))
    k = 0
    while k < len(conds):
        others = conds[:k] + conds[k + 1:]
        if not region_feasible(others + [conds[k].negate()]):
            conds = others
        else:
            k += 1
    return tuple(conds)


@dataclass(frozen=True)
class Case:
    region: tuple = ()         # Conds
    pos: frozenset = frozenset()
    neg: tuple = ()            # tuple of frozensets (subtracted groups)

    def holds(self, values) -> bool:
        return all(c.holds(values) for c in self.region)


@dataclass(frozen=True)
class AsymBound:
    cases: tuple = (Case(),)
    scale: Monomial = ONE

    @property
    def is_zero(self) -> bool:
        return all(not c.pos for c in self.cases)

    def __str__(self):
        return render(self)


ZERO = AsymBound()


def bound(pos, neg_groups=(), region=()) -> AsymBound:
    return simplify(AsymBound((Case(tuple(region), frozenset(pos),
                                    tuple(frozenset(g) for g in neg_groups if g)),)))


def _undominated(monos):
    monos = set(monos)
    return frozenset(m for m in monos if not any(m != o and m.dominated_by(o) for o in monos))


def simplify(b: AsymBound) -> AsymBound:
    """Drop monomials dominated by another in the same term set."""
    cases = []
    for c in b.cases:
        pos = _undominated(c.pos)
        allneg = _undominated(m for g in c.neg for m in g)
        groups = []
        for g in c.neg:
            kept = frozenset(m for m in g if m in allneg)
            allneg = allneg - kept
            if kept and kept not in groups:
                groups.append(kept)
        cases.append(Case(c.region, pos, tuple(groups)))
    return AsymBound(tuple(cases), b.scale)


def _unscaled(b: AsymBound) -> AsymBound:
    if b.scale == ONE:
        return b
    s = b.scale
    return AsymBound(tuple(Case(c.region, frozenset(m * s for m in c.pos),
                                tuple(frozenset(m * s for m in g) for g in c.neg)) for c in b.cases))


def add(a: AsymBound, b: AsymBound) -> AsymBound:
    """Sum of two bounds; regions are intersected pairwise."""
    if a.is_zero:
        return b
    if b.is_zero:
        return a
    scale = a.scale if a.scale == b.scale else ONE
    if scale == ONE:
        a, b = _unscaled(a), _unscaled(b)
    cases = []
    for ca in a.cases:
        for cb in b.cases:
            region = _merge_region(ca.region, cb.region)
            if not region_feasible(region):
                continue
            region = reduce_region(region)
            cases.append(Case(region, ca.pos | cb.pos, ca.neg + tuple(g for g in cb.neg if g not in ca.neg)))
    return simplify(AsymBound(tuple(cases), scale))


def _merge_region(r1, r2):
    out = list(r1)
    for c in r2:
        if c not in out:
            out.append(c)
    return tuple(out)


def scale_by(b: AsymBound, m: Monomial) -> AsymBound:
    if any(e < 0 for _, e in m.exps):
        raise ValueError("scale factor must have nonnegative exponents")
    if b.is_zero:
        return b
    return AsymBound(b.cases, b.scale * m)


def subtract_tags(b: AsymBound, tag_count) -> AsymBound:
    """Append a group of subtracted monomials to every case."""
    group = frozenset(tag_count)
    if not group:
        return b
    return simplify(AsymBound(tuple(Case(c.region, c.pos, c.neg + (group,)) for c in b.cases), b.scale))


def log_values(b: AsymBound, binding) -> dict:
    terms = {t for c in b.cases for cond in c.region for t, _ in cond.form.coeffs}
    return {t: t.value(binding) for t in terms}


def select_case(b: AsymBound, binding) -> Case:
    values = log_values(b, binding)
    for c in b.cases:
        if c.holds(values):
            return c
    raise ValueError("binding is outside every case region")


def eval_at(b: AsymBound, binding) -> float:
    """sum(pos) - sum(neg) at the binding, for the first case containing it."""
    if b.is_zero:
        return 0.0
    c = select_case(b, binding)
    s = b.scale.eval(binding)
    return s * (sum(m.eval(binding) for m in c.pos) - sum(m.eval(binding) for g in c.neg for m in g))


def _sum_str(monos) -> str:
    return " + ".join(str(m) for m in sorted(monos, key=Monomial.sort_key))


def render_case(c: Case, scale: Monomial = ONE) -> str:
    if not c.pos:
        return "0"
    body = _sum_str(c.pos)
    for g in sorted(c.neg, key=lambda g: sorted(Monomial.sort_key(m) for m in g)):
        body += f" - ({_sum_str(g)})" if len(g) > 1 else f" - {_sum_str(g)}"
    if scale != ONE:
        body = f"{scale}*({body})"
    return f"Omega({body})"


def render_region(region) -> str:
    return " and ".join(str(c) for c in region)


def render(b: AsymBound) -> str:
    lines = []
    for c in b.cases:
        s = render_case(c, b.scale)
        if c.region:
            s += " when " + render_region(c.region)
        lines.append(s)
    return "\n".join(lines)


def as_json(b: AsymBound) -> dict:
    def mono(m):
        return {str(k): _num(e) for k, e in m.exps}

    return {
        "scale": mono(b.scale),
        "cases": [{
            "region": [{"form": str(c.form), "strict": c.strict} for c in case.region],
            "positive": [mono(m) for m in sorted(case.pos, key=Monomial.sort_key)],
            "negative": [[mono(m) for m in sorted(g, key=Monomial.sort_key)] for g in case.neg],
            "text": render_case(case, b.scale),
        } for case in b.cases],
    }
