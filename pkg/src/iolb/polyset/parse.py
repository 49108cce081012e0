"""Parser for the set/relation notation.

    [N,T] -> { S2[t,i] -> S2[t+1,i] : 1<=t<T-1 and 1<=i<N-1 ; ... }

Tuple entries are either fresh identifiers (new dimensions) or affine
expressions (an anonymous dimension plus an equality).  Constraints are
chains of comparisons joined by ``and``; ``;`` separates disjuncts.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from functools import reduce

from .sets import AffRelation, IntSet, ParamSpace, _prune
from .system import System


class ParseError(ValueError):
    def __init__(self, msg, line=None, col=None):
        self.line, self.col = line, col
        where = f"line {line}, column {col}: " if line is not None else ""
        super().__init__(where + msg)


@dataclass
class Token:
    kind: str  # "id", "int", "op", "eof"
    text: str
    line: int
    col: int


_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<int>\d+)
  | (?P<id>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<op>->|<=|>=|==|[-+*<>=\[\]{}(),:;])
""", re.VERBOSE)


def tokenize(text: str):
    tokens = []
    line, start = 1, 0
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            start = m.end()
        elif kind not in ("ws", "comment"):
            tokens.append(Token(kind, m.group(), line, m.start() - start + 1))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - start + 1))
    return tokens


class Affine:
    """Affine form over named variables with rational coefficients."""

    def __init__(self, terms=None, const=0):
        self.terms = dict(terms or {})
        self.const = Fraction(const)

    def __add__(self, o):
        t = dict(self.terms)
        for k, v in o.terms.items():
            t[k] = t.get(k, 0) + v
        return Affine({k: v for k, v in t.items() if v}, self.const + o.const)

    def scale(self, f):
        return Affine({k: v * f for k, v in self.terms.items()}, self.const * f)

    def __sub__(self, o):
        return self + o.scale(-1)

    def is_const(self):
        return not self.terms


class TokenStream:
    def __init__(self, tokens):
        self.tokens = tokens
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def peek(self, k=1) -> Token:
        return self.tokens[min(self.i + k, len(self.tokens) - 1)]

    def next(self) -> Token:
        t = self.tokens[self.i]
        if t.kind != "eof":
            self.i += 1
        return t

    def error(self, msg, tok=None):
        tok = tok or self.tok
        return ParseError(msg, tok.line, tok.col)

    def at(self, text) -> bool:
        return self.tok.text == text and self.tok.kind in ("op", "id")

    def accept(self, text) -> bool:
        if self.at(text):
            self.next()
            return True
        return False

    def expect(self, text) -> Token:
        if not self.at(text):
            raise self.error(f"expected {text!r}, found {self.tok.text or 'end of input'!r}")
        return self.next()

    def ident(self) -> str:
        if self.tok.kind != "id":
            raise self.error(f"expected identifier, found {self.tok.text or 'end of input'!r}")
        return self.next().text


_RELOPS = ("<=", "<", ">=", ">", "=", "==")


class _Scope:
    def __init__(self, params, outer):
        self.params = list(params)
        self.outer = outer
        self.dims = {}

    def lookup(self, name, ts, tok):
        if name in self.dims:
            return ("d", self.dims[name])
        if name in self.params:
            return ("p", name)
        if self.outer is not None and name in self.outer.names:
            self.params.append(name)
            return ("p", name)
        raise ts.error(f"unknown identifier {name!r}", tok)


def _parse_expr(ts: TokenStream, scope: _Scope) -> Affine:
    neg = False
    if ts.at("-"):
        ts.next()
        neg = True
    e = _parse_term(ts, scope)
    if neg:
        e = e.scale(-1)
    while ts.at("+") or ts.at("-"):
        op = ts.next().text
        t = _parse_term(ts, scope)
        e = e + t if op == "+" else e - t
    return e


def _parse_term(ts, scope) -> Affine:
    f = _parse_factor(ts, scope)
    while True:
        if ts.at("*"):
            ts.next()
        elif not (f.is_const() and ((ts.tok.kind == "id" and ts.tok.text != "and") or ts.at("("))):
            break
        tok = ts.tok
        g = _parse_factor(ts, scope)
        if f.is_const():
            f = g.scale(f.const)
        elif g.is_const():
            f = f.scale(g.const)
        else:
            raise ts.error("non-affine product", tok)
    return f


def _parse_factor(ts, scope) -> Affine:
    tok = ts.tok
    if tok.kind == "int":
        ts.next()
        return Affine(const=int(tok.text))
    if tok.kind == "id" and tok.text != "and":
        ts.next()
        return Affine({scope.lookup(tok.text, ts, tok): 1})
    if ts.accept("("):
        e = _parse_expr(ts, scope)
        ts.expect(")")
        return e
    if ts.at("-"):
        ts.next()
        return _parse_factor(ts, scope).scale(-1)
    raise ts.error(f"expected expression, found {tok.text or 'end of input'!r}")


def _parse_tuple(ts, scope, eqs, names):
    tag = ""
    if ts.tok.kind == "id" and ts.peek().text == "[":
        tag = ts.next().text
    ts.expect("[")
    count = 0
    if not ts.at("]"):
        while True:
            tok = ts.tok
            nxt = ts.peek()
            fresh = (tok.kind == "id" and nxt.text in (",", "]") and tok.text not in scope.dims
                     and tok.text not in scope.params
                     and not (scope.outer is not None and tok.text in scope.outer.names))
            idx = len(scope.dims_order)
            if fresh:
                ts.next()
                scope.dims[tok.text] = idx
                scope.dims_order.append(tok.text)
                names.append(tok.text)
            else:
                e = _parse_expr(ts, scope)
                key = f"_{idx}"
                scope.dims[key] = idx
                scope.dims_order.append(key)
                names.append(tok.text if tok.kind == "id" and nxt.text in (",", "]") else f"c{idx}")
                eqs.append(Affine({("d", idx): 1}) - e)
            count += 1
            if not ts.accept(","):
                break
    ts.expect("]")
    return tag, count


def _parse_constraints(ts, scope, eqs, ineqs):
    while True:
        left = _parse_expr(ts, scope)
        if ts.tok.text not in _RELOPS:
            raise ts.error(f"expected comparison, found {ts.tok.text or 'end of input'!r}")
        while ts.tok.text in _RELOPS:
            op = ts.next().text
            right = _parse_expr(ts, scope)
            if op in ("=", "=="):
                eqs.append(right - left)
            elif op == "<=":
                ineqs.append(right - left)
            elif op == "<":
                ineqs.append(right - left - Affine(const=1))
            elif op == ">=":
                ineqs.append(left - right)
            else:
                ineqs.append(left - right - Affine(const=1))
            left = right
        if not ts.accept("and"):
            break


def _parse_disjunct(ts, scope):
    eqs, ineqs = [], []
    in_names, out_names = [], []
    scope.dims = {}
    scope.dims_order = []
    tag_in, n_in = _parse_tuple(ts, scope, eqs, in_names)
    rel = False
    tag_out, n_out = "", 0
    if ts.accept("->"):
        rel = True
        tag_out, n_out = _parse_tuple(ts, scope, eqs, out_names)
    if ts.accept(":"):
        _parse_constraints(ts, scope, eqs, ineqs)
    return dict(rel=rel, tag_in=tag_in, n_in=n_in, tag_out=tag_out, n_out=n_out,
                eqs=eqs, ineqs=ineqs, in_names=in_names, out_names=out_names)


def _to_row(e: Affine, ndims, params: ParamSpace):
    row = [Fraction(0)] * (ndims + len(params) + 1)
    for (kind, k), v in e.terms.items():
        row[k if kind == "d" else ndims + params.index(k)] += v
    row[-1] = e.const
    den = reduce(lcm, (v.denominator for v in row), 1)
    return tuple(int(v * den) for v in row)


def parse_object(ts: TokenStream, params: ParamSpace | None = None):
    """Parse one set or relation from the stream."""
    local = []
    if ts.at("["):
        ts.next()
        if not ts.at("]"):
            while True:
                local.append(ts.ident())
                if not ts.accept(","):
                    break
        ts.expect("]")
        ts.expect("->")
    start = ts.tok
    ts.expect("{")
    if params is not None:
        for n in local:
            if n not in params.names:
                raise ts.error(f"parameter {n!r} is not declared", start)
    scope = _Scope(local, params)
    disjuncts = []
    if not ts.at("}"):
        while True:
            disjuncts.append(_parse_disjunct(ts, scope))
            if not ts.accept(";"):
                break
    ts.expect("}")
    if not disjuncts:
        raise ts.error("empty set notation needs at least one tuple", start)
    first = disjuncts[0]
    for d in disjuncts[1:]:
        if (d["rel"], d["tag_in"], d["n_in"], d["tag_out"], d["n_out"]) != \
                (first["rel"], first["tag_in"], first["n_in"], first["tag_out"], first["n_out"]):
            raise ts.error("disjuncts live in different spaces", start)
    pspace = params if params is not None else ParamSpace(tuple(scope.params))
    nd = first["n_in"] + first["n_out"]
    systems = [System(nd + len(pspace),
                      [_to_row(e, nd, pspace) for e in d["eqs"]],
                      [_to_row(e, nd, pspace) for e in d["ineqs"]]) for d in disjuncts]
    if first["rel"]:
        return AffRelation(first["tag_in"], first["tag_out"], first["n_in"], first["n_out"], pspace,
                           _prune(systems), tuple(first["in_names"]), tuple(first["out_names"]))
    return IntSet(first["tag_in"], first["n_in"], pspace, _prune(systems), tuple(first["in_names"]))


def parse(text: str, params: ParamSpace | None = None):
    ts = TokenStream(tokenize(text))
    obj = parse_object(ts, params)
    if ts.tok.kind != "eof":
        raise ts.error(f"trailing input {ts.tok.text!r}")
    return obj


def parse_set(text: str, params: ParamSpace | None = None) -> IntSet:
    obj = parse(text, params)
    if not isinstance(obj, IntSet):
        raise ParseError("expected a set, got a relation")
    return obj


def parse_relation(text: str, params: ParamSpace | None = None) -> AffRelation:
    obj = parse(text, params)
    if not isinstance(obj, AffRelation):
        raise ParseError("expected a relation, got a set")
    return obj
