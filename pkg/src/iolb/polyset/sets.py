"""Parametric integer sets and affine relations.

Column layout of every underlying system: set dimensions (for a relation,
input dimensions then output dimensions), then parameters.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import gcd, lcm
from functools import reduce

from .. import linalg
from . import system as sy
from .system import System, normalize


@dataclass(frozen=True)
class ParamSpace:
    names: tuple = ()

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"duplicate parameter in {self.names}")

    def __len__(self):
        return len(self.names)

    def index(self, name):
        return self.names.index(name)

    def merge(self, other: "ParamSpace") -> "ParamSpace":
        extra = tuple(n for n in other.names if n not in self.names)
        return ParamSpace(self.names + extra) if extra else self


@dataclass(frozen=True)
class LinExpr:
    coeffs: tuple
    param_coeffs: tuple
    constant: Fraction


@dataclass(frozen=True)
class Polyhedron:
    space_tag: str
    dim: int
    params: ParamSpace
    system: System

    @property
    def constraints(self):
        d = self.dim
        out = []
        for r, is_eq in self.system.rows():
            e = LinExpr(tuple(Fraction(v) for v in r[:d]),
                        tuple(Fraction(v) for v in r[d:-1]), Fraction(r[-1]))
            out.append((e, "=0" if is_eq else ">=0"))
        return out


def _lift(s: System, dim: int, src: ParamSpace, dst: ParamSpace) -> System:
    if src == dst:
        return s
    mapping = list(range(dim)) + [dim + dst.index(n) for n in src.names]
    return sy.remap(s, dim + len(dst), mapping)


def _target(have: ParamSpace, want: ParamSpace) -> ParamSpace:
    if set(have.names) <= set(want.names):
        return want
    return have.merge(want)


def _check_tags(t1, t2):
    if t1 and t2 and t1 != t2:
        raise ValueError(f"space mismatch: {t1} vs {t2}")


def _default_names(prefix, n):
    return tuple(f"{prefix}{k}" for k in range(n))


@dataclass(frozen=True)
class IntSet:
    space_tag: str
    dim: int
    params: ParamSpace
    systems: tuple = ()
    names: tuple = ()

    def __post_init__(self):
        if not self.names:
            object.__setattr__(self, "names", _default_names("i", self.dim))

    @property
    def pieces(self):
        return [Polyhedron(self.space_tag, self.dim, self.params, s) for s in self.systems]

    @property
    def nvars(self):
        return self.dim + len(self.params)

    def with_params(self, params: ParamSpace) -> "IntSet":
        params = _target(self.params, params)
        if params == self.params:
            return self
        return IntSet(self.space_tag, self.dim, params,
                      tuple(_lift(s, self.dim, self.params, params) for s in self.systems), self.names)

    def _make(self, systems, params=None) -> "IntSet":
        return IntSet(self.space_tag, self.dim, params or self.params, _prune(systems), self.names)

    def is_empty(self) -> bool:
        return not self.systems

    def __str__(self):
        return format_set(self)


def _prune(systems):
    out = []
    seen = set()
    for s in systems:
        s = normalize(s)
        if s is None or s in seen or sy.is_empty(s):
            continue
        seen.add(s)
        out.append(s)
    return tuple(out)


def universe(tag: str, dim: int, params: ParamSpace = ParamSpace(), names=()) -> IntSet:
    return IntSet(tag, dim, params, (System(dim + len(params)),), tuple(names))


def empty_set(tag: str, dim: int, params: ParamSpace = ParamSpace(), names=()) -> IntSet:
    return IntSet(tag, dim, params, (), tuple(names))


def _align(a, b):
    p = a.params.merge(b.params)
    return a.with_params(p), b.with_params(p)


def intersect(a: IntSet, b: IntSet) -> IntSet:
    _check_tags(a.space_tag, b.space_tag)
    if a.dim != b.dim:
        raise ValueError("dimension mismatch")
    a, b = _align(a, b)
    return a._make([x.conj(y) for x, y in product(a.systems, b.systems)])


def union(a: IntSet, b: IntSet) -> IntSet:
    _check_tags(a.space_tag, b.space_tag)
    if a.dim != b.dim:
        raise ValueError("dimension mismatch")
    a, b = _align(a, b)
    return a._make(a.systems + b.systems)


def subtract(a: IntSet, b: IntSet) -> IntSet:
    _check_tags(a.space_tag, b.space_tag)
    if a.dim != b.dim:
        raise ValueError("dimension mismatch")
    a, b = _align(a, b)
    out = []
    for s in a.systems:
        parts = [s]
        for t in b.systems:
            nxt = []
            for p in parts:
                nxt.extend(sy.subtract(p, t))
            parts = nxt
        out.extend(parts)
    return a._make(out)


def add_constraints(a: IntSet, eqs=(), ineqs=()) -> IntSet:
    return a._make([s.add(eqs, ineqs) for s in a.systems])


def project_out(s: IntSet, dims) -> IntSet:
    dims = sorted(set(dims))
    for d in dims:
        if not 0 <= d < s.dim:
            raise ValueError(f"bad dimension {d}")
    out = []
    for t in s.systems:
        p = sy.project(t, dims)
        if p is not None:
            out.append(p)
    names = tuple(n for k, n in enumerate(s.names) if k not in dims)
    return IntSet(s.space_tag, s.dim - len(dims), s.params, _prune(out), names)


def project_onto(s: IntSet, dims) -> IntSet:
    keep = set(dims)
    return project_out(s, [k for k in range(s.dim) if k not in keep])


def linear_image(s: IntSet, rows, tag: str | None = None) -> IntSet:
    """The set {P.x : x in s} for an integer matrix P given by its rows."""
    m, d, np_ = len(rows), s.dim, len(s.params)
    out = []
    for t in s.systems:
        eqs, ineqs = [], []
        for r, is_eq in t.rows():
            row = (0,) * m + tuple(r)
            (eqs if is_eq else ineqs).append(row)
        for k, prow in enumerate(rows):
            row = [0] * (m + d + np_ + 1)
            row[k] = 1
            for j, v in enumerate(prow):
                row[m + j] = -int(v)
            eqs.append(tuple(row))
        p = sy.project(System(m + d + np_, eqs, ineqs), range(m, m + d))
        if p is not None:
            out.append(p)
    return IntSet(s.space_tag if tag is None else tag, m, s.params, _prune(out))


# ---- relations ---------------------------------------------------------------

@dataclass(frozen=True)
class AffRelation:
    in_tag: str
    out_tag: str
    in_dim: int
    out_dim: int
    params: ParamSpace
    systems: tuple = ()
    in_names: tuple = ()
    out_names: tuple = ()

    def __post_init__(self):
        if not self.in_names:
            object.__setattr__(self, "in_names", _default_names("i", self.in_dim))
        if not self.out_names:
            object.__setattr__(self, "out_names", _default_names("o", self.out_dim))

    @property
    def pieces(self):
        tag = f"{self.in_tag}->{self.out_tag}"
        return [Polyhedron(tag, self.in_dim + self.out_dim, self.params, s) for s in self.systems]

    @property
    def dim(self):
        return self.in_dim + self.out_dim

    def with_params(self, params: ParamSpace) -> "AffRelation":
        params = _target(self.params, params)
        if params == self.params:
            return self
        return AffRelation(self.in_tag, self.out_tag, self.in_dim, self.out_dim, params,
                           tuple(_lift(s, self.dim, self.params, params) for s in self.systems),
                           self.in_names, self.out_names)

    def _make(self, systems) -> "AffRelation":
        return AffRelation(self.in_tag, self.out_tag, self.in_dim, self.out_dim, self.params,
                           _prune(systems), self.in_names, self.out_names)

    def is_empty(self) -> bool:
        return not self.systems

    def split(self):
        """One single-piece relation per disjunct."""
        return [self._make([s]) for s in self.systems]

    def __str__(self):
        return format_relation(self)


def domain(r: AffRelation) -> IntSet:
    out = [sy.project(s, range(r.in_dim, r.dim)) for s in r.systems]
    return IntSet(r.in_tag, r.in_dim, r.params, _prune([s for s in out if s is not None]), r.in_names)


def image(r: AffRelation) -> IntSet:
    out = [sy.project(s, range(r.in_dim)) for s in r.systems]
    return IntSet(r.out_tag, r.out_dim, r.params, _prune([s for s in out if s is not None]), r.out_names)


def inverse(r: AffRelation) -> AffRelation:
    n = r.dim + len(r.params)
    mapping = ([r.out_dim + k for k in range(r.in_dim)] + list(range(r.out_dim))
               + list(range(r.dim, n)))
    return AffRelation(r.out_tag, r.in_tag, r.out_dim, r.in_dim, r.params,
                       tuple(sy.remap(s, n, mapping) for s in r.systems), r.out_names, r.in_names)


def _set_to_rel_cols(s: IntSet, r: AffRelation, offset: int) -> list:
    """Lift a set's systems into a relation's column layout at offset."""
    n = r.dim + len(r.params)
    mapping = [offset + k for k in range(s.dim)] + [r.dim + k for k in range(len(r.params))]
    return [sy.remap(t, n, mapping) for t in s.systems]


def intersect_domain(r: AffRelation, s: IntSet) -> AffRelation:
    _check_tags(r.in_tag, s.space_tag)
    if s.dim != r.in_dim:
        raise ValueError("dimension mismatch")
    p = r.params.merge(s.params)
    r, s = r.with_params(p), s.with_params(p)
    lifted = _set_to_rel_cols(s, r, 0)
    return r._make([a.conj(b) for a, b in product(r.systems, lifted)])


def intersect_range(r: AffRelation, s: IntSet) -> AffRelation:
    _check_tags(r.out_tag, s.space_tag)
    if s.dim != r.out_dim:
        raise ValueError("dimension mismatch")
    p = r.params.merge(s.params)
    r, s = r.with_params(p), s.with_params(p)
    lifted = _set_to_rel_cols(s, r, r.in_dim)
    return r._make([a.conj(b) for a, b in product(r.systems, lifted)])


def apply(r: AffRelation, s: IntSet) -> IntSet:
    """r(s): the image of s under r."""
    return image(intersect_domain(r, s))


def compose(r2: AffRelation, r1: AffRelation) -> AffRelation:
    """r2 after r1, restricted to points where the composition applies."""
    _check_tags(r1.out_tag, r2.in_tag)
    if r1.out_dim != r2.in_dim:
        raise ValueError("dimension mismatch")
    p = r1.params.merge(r2.params)
    r1, r2 = r1.with_params(p), r2.with_params(p)
    a, m, b, np_ = r1.in_dim, r1.out_dim, r2.out_dim, len(p)
    n = a + m + b + np_
    map1 = list(range(a + m)) + [a + m + b + k for k in range(np_)]
    map2 = [a + k for k in range(m + b)] + [a + m + b + k for k in range(np_)]
    out = []
    for s1, s2 in product(r1.systems, r2.systems):
        joined = sy.remap(s1, n, map1).conj(sy.remap(s2, n, map2))
        t = sy.project(joined, range(a, a + m))
        if t is not None:
            out.append(t)
    return AffRelation(r1.in_tag, r2.out_tag, a, b, p, _prune(out), r1.in_names, r2.out_names)


def identity(s: IntSet) -> AffRelation:
    d, np_ = s.dim, len(s.params)
    n = 2 * d + np_
    eqs = []
    for k in range(d):
        row = [0] * (n + 1)
        row[k] = 1
        row[d + k] = -1
        eqs.append(tuple(row))
    mapping = list(range(d)) + [2 * d + k for k in range(np_)]
    systems = [sy.remap(t, n, mapping).add(eqs=eqs) for t in s.systems]
    return AffRelation(s.space_tag, s.space_tag, d, d, s.params, _prune(systems),
                       s.names, tuple(x + "'" for x in s.names))


def frontier(d: IntSet, r: AffRelation) -> IntSet:
    """Points of d with no incoming edge under r: d minus r(d)."""
    _check_tags(d.space_tag, r.in_tag)
    _check_tags(d.space_tag, r.out_tag)
    return subtract(d, apply(r, d))


def relation_from_pairs_check(r: AffRelation, binding: dict):
    """Concrete (src, dst) pairs of r at a binding (testing aid)."""
    from .count import concrete_systems
    pts = set()
    for t in concrete_systems(r.systems, r.params, binding):
        pts.update(sy.Enumerator(t).points())
    return sorted((p[:r.in_dim], p[r.in_dim:]) for p in pts)


# ---- linear-algebra views ------------------------------------------------------

@dataclass(frozen=True)
class Subspace:
    """Linear subspace of Q^n, stored as the integer rows of an RREF basis."""
    n: int
    basis: tuple = ()

    @staticmethod
    def span(vectors, n: int | None = None) -> "Subspace":
        vectors = [list(v) for v in vectors if any(v)]
        if n is None:
            n = len(vectors[0])
        return Subspace(n, tuple(tuple(v) for v in linalg.row_basis(vectors)))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace.span(list(self.basis) + list(other.basis), self.n)

    def contains(self, v) -> bool:
        return linalg.in_span([list(b) for b in self.basis], list(v))

    def contains_space(self, other: "Subspace") -> bool:
        return all(self.contains(v) for v in other.basis)

    def intersect(self, other: "Subspace") -> "Subspace":
        if not self.basis or not other.basis:
            return Subspace(self.n)
        cols = [list(b) for b in self.basis] + [[-x for x in b] for b in other.basis]
        mat = linalg.transpose(cols)
        ns = linalg.nullspace(mat, len(cols))
        vecs = []
        for coeffs in ns:
            v = [sum(Fraction(coeffs[i]) * self.basis[i][j] for i in range(len(self.basis)))
                 for j in range(self.n)]
            vecs.append(v)
        return Subspace.span(vecs, self.n)

    def complement(self) -> "Subspace":
        return Subspace.span(linalg.orthogonal_complement([list(b) for b in self.basis], self.n), self.n)

    def __str__(self):
        return "<" + ", ".join("(" + ",".join(str(x) for x in b) + ")" for b in self.basis) + ">"


@dataclass(frozen=True)
class AffineMapForm:
    matrix: tuple          # out_dim x in_dim, Fractions
    offset: tuple          # constant part, Fractions
    param_offset: tuple    # out_dim x nparams, Fractions
    guard: IntSet

    def is_invertible(self) -> bool:
        return is_invertible_map(self)


def _piece_map(s: System, in_dim: int, out_dim: int, np_: int):
    if not out_dim:
        return (), (), ()
    cols = list(range(in_dim, in_dim + out_dim)) + list(range(in_dim)) + list(range(in_dim + out_dim, in_dim + out_dim + np_))
    if not s.eqs:
        return None
    rows = [[r[c] for c in cols] + [r[-1]] for r in s.eqs]
    red, pivots = linalg.rref(rows)
    if pivots[:out_dim] != list(range(out_dim)):
        return None
    matrix, offset, poff = [], [], []
    for j in range(out_dim):
        row = red[j]
        matrix.append(tuple(-row[out_dim + k] for k in range(in_dim)))
        poff.append(tuple(-row[out_dim + in_dim + k] for k in range(np_)))
        offset.append(-row[-1])
    return tuple(matrix), tuple(offset), tuple(poff)


def as_affine_map(r: AffRelation) -> AffineMapForm | None:
    """x -> A.x + b form valid on every piece, or None."""
    if r.is_empty():
        return None
    form = None
    for s in r.systems:
        f = _piece_map(s, r.in_dim, r.out_dim, len(r.params))
        if f is None:
            return None
        if form is None:
            form = f
        elif f != form:
            return None
    matrix, offset, poff = form
    if not r.out_dim:
        matrix = ()
    return AffineMapForm(matrix, offset, poff, domain(r))


def is_invertible_map(m: AffineMapForm) -> bool:
    rows = [list(r) for r in m.matrix]
    if not rows or len(rows) != len(rows[0]):
        return False
    return linalg.det(rows) != 0


def as_translation(r: AffRelation):
    """b when r is x -> x + b on its domain, else None."""
    if r.in_dim != r.out_dim:
        return None
    m = as_affine_map(r)
    if m is None:
        return None
    n = r.in_dim
    for i in range(n):
        for j in range(n):
            if m.matrix[i][j] != (1 if i == j else 0):
                return None
    if any(v for row in m.param_offset for v in row):
        return None
    if any(v.denominator != 1 for v in m.offset):
        return None
    return tuple(int(v) for v in m.offset)


def kernel_basis(m: AffineMapForm, n: int | None = None) -> Subspace:
    rows = [list(r) for r in m.matrix]
    if n is None:
        n = len(rows[0]) if rows else m.guard.dim
    if not rows:
        return Subspace.span([[1 if i == j else 0 for i in range(n)] for j in range(n)], n)
    return Subspace.span(linalg.nullspace(rows, n), n)


def _transform_rows(s: System, mat, dim_blocks, nvars):
    """Rewrite rows under x = M x' for each dimension block."""
    out_eq, out_in = [], []
    for r, is_eq in s.rows():
        new = [Fraction(v) for v in r]
        for start in dim_blocks:
            k = len(mat)
            a = [Fraction(r[start + j]) for j in range(k)]
            for j in range(k):
                new[start + j] = sum(a[i] * mat[i][j] for i in range(k))
        den = reduce(lcm, (v.denominator for v in new), 1)
        row = tuple(int(v * den) for v in new)
        (out_eq if is_eq else out_in).append(row)
    return System(nvars, out_eq, out_in)


def change_basis(s, mat):
    """Rewrite constraints under x = mat.x' (both sides for a relation)."""
    mat = [[Fraction(v) for v in row] for row in mat]
    if linalg.det(mat) == 0:
        raise ValueError("singular change of basis")
    k = len(mat)
    if isinstance(s, IntSet):
        if k != s.dim:
            raise ValueError("arity mismatch")
        return s._make([_transform_rows(t, mat, [0], s.nvars) for t in s.systems])
    if isinstance(s, AffRelation):
        if k != s.in_dim or k != s.out_dim:
            raise ValueError("arity mismatch")
        n = s.dim + len(s.params)
        return s._make([_transform_rows(t, mat, [0, s.in_dim], n) for t in s.systems])
    raise TypeError(type(s))


# ---- printing ------------------------------------------------------------------

def _fmt_side(terms, k):
    parts = [n if c == 1 else f"{c}*{n}" for c, n in terms]
    s = " + ".join(parts)
    if k > 0:
        s = f"{s} + {k}" if s else str(k)
    elif k < 0:
        s = f"{s} - {-k}" if s else str(k)
    return s or "0"


def _fmt_row(r, names, is_eq):
    pos = [(c, n) for c, n in zip(r[:-1], names) if c > 0]
    neg = [(-c, n) for c, n in zip(r[:-1], names) if c < 0]
    c = r[-1]
    # a.x + c >= 0 reads pos >= neg - c
    if pos:
        return f"{_fmt_side(pos, 0)} {'=' if is_eq else '>='} {_fmt_side(neg, -c)}"
    return f"{_fmt_side(neg, 0)} {'=' if is_eq else '<='} {c}"


def format_constraints(systems, names):
    if not systems:
        return None
    out = []
    for s in systems:
        rows = [_fmt_row(r, names, True) for r in s.eqs] + [_fmt_row(r, names, False) for r in s.ineqs]
        out.append(" and ".join(rows))
    return out


def _params_prefix(params):
    return f"[{', '.join(params.names)}] -> " if params.names else ""


def format_set(s: IntSet) -> str:
    tup = f"{s.space_tag}[{', '.join(s.names)}]"
    if not s.systems:
        return _params_prefix(s.params) + "{ }"
    names = list(s.names) + list(s.params.names)
    parts = []
    for c in format_constraints(s.systems, names):
        parts.append(f"{tup} : {c}" if c else tup)
    return _params_prefix(s.params) + "{ " + "; ".join(parts) + " }"


def format_relation(r: AffRelation) -> str:
    in_names = list(r.in_names)
    out_names = [n if n not in in_names else n + "'" for n in r.out_names]
    tup = f"{r.in_tag}[{', '.join(in_names)}] -> {r.out_tag}[{', '.join(out_names)}]"
    if not r.systems:
        return _params_prefix(r.params) + "{ }"
    names = in_names + out_names + list(r.params.names)
    parts = []
    for c in format_constraints(r.systems, names):
        parts.append(f"{tup} : {c}" if c else tup)
    return _params_prefix(r.params) + "{ " + "; ".join(parts) + " }"
