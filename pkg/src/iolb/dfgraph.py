"""Program files, data-flow graphs and edge classification.

A program file declares parameters, statement domains and dependence
relations:

    params N, T;
    input I { [N] -> { I[i] : 0<=i<N } };
    stmt S2 { [N,T] -> { S2[t,i] : 1<=t<T and 1<=i<N-1 } };
    output A from S3;
    edge e7 : [N,T] -> { S2[t,i] -> S3[t,i] : 1<=t<T and 1<=i<N-1 };
    group seidel { S4 };
    repeat W { matmul; seidel };

An input may be declared ``tagged`` when it stands for values produced
outside the analyzed fragment.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .pebblelab.cdag import CDAG
from .polyset import (AffRelation, IntSet, ParamSpace, ParseError, as_affine_map, card_at,
                      dim_of, domain, image, inverse, is_invertible_map)
from .polyset.count import concrete_systems
from .polyset.parse import TokenStream, parse_object, tokenize
from .polyset import system as sy

MAX_DISJUNCTS = 8
VERTEX_CAP = 10_000

INPUT, COMPUTE, OUTPUT, COMPUTE_OUTPUT = "input", "compute", "output", "compute+output"


class EdgeClass(str, Enum):
    INJECTIVE = "injective"
    BROADCAST1 = "broadcast1"
    BROADCASTK = "broadcastk"
    SKIPPED = "skipped"
    NONE = "none"


class VertexCapExceeded(ValueError):
    pass


@dataclass(frozen=True)
class Statement:
    name: str
    domain: IntSet
    role: str = COMPUTE
    tagged: bool = False       # input that stands for values produced elsewhere
    line: int = 0

    @property
    def is_input(self) -> bool:
        return self.role == INPUT

    @property
    def is_output(self) -> bool:
        return self.role in (OUTPUT, COMPUTE_OUTPUT)


@dataclass(frozen=True)
class Edge:
    name: str
    src: str
    dst: str
    relation: AffRelation
    line: int = 0


@dataclass(frozen=True)
class Group:
    name: str
    members: tuple


@dataclass(frozen=True)
class Repeat:
    factor: str
    groups: tuple


@dataclass
class ProgramSpec:
    params: ParamSpace
    statements: list
    edges: list
    groups: list = field(default_factory=list)
    repeats: list = field(default_factory=list)
    outputs: dict = field(default_factory=dict)   # array name -> statement

    def statement(self, name) -> Statement:
        for s in self.statements:
            if s.name == name:
                return s
        raise KeyError(name)


def _expect_end(ts):
    ts.expect(";")


def _parse_braced_object(ts, params):
    ts.expect("{")
    obj = parse_object(ts, params)
    ts.expect("}")
    return obj


def parse_program(text: str) -> ProgramSpec:
    """Parse a program file; errors carry line and column."""
    ts = TokenStream(tokenize(text))
    params = None
    stmts, edges, groups, repeats, outputs = [], [], [], [], {}
    names = {}
    output_of = {}
    while ts.tok.kind != "eof":
        tok = ts.tok
        kw = ts.ident()
        if kw == "params":
            if params is not None:
                raise ts.error("parameters declared twice", tok)
            plist = [ts.ident()]
            while ts.accept(","):
                plist.append(ts.ident())
            try:
                params = ParamSpace(tuple(plist))
            except ValueError as e:
                raise ts.error(str(e), tok) from None
            _expect_end(ts)
            continue
        if params is None:
            params = ParamSpace()
        if kw in ("input", "stmt"):
            name_tok = ts.tok
            name = ts.ident()
            if name in names:
                raise ts.error(f"statement {name!r} declared twice", name_tok)
            obj = _parse_braced_object(ts, params)
            if not isinstance(obj, IntSet):
                raise ts.error(f"domain of {name} must be a set", name_tok)
            if obj.space_tag != name:
                raise ts.error(f"domain of {name} is written over {obj.space_tag}", name_tok)
            tagged = False
            if kw == "input" and ts.at("tagged"):
                ts.next()
                tagged = True
            _expect_end(ts)
            st = Statement(name, obj.with_params(params), INPUT if kw == "input" else COMPUTE,
                           tagged, tok.line)
            names[name] = len(stmts)
            stmts.append(st)
        elif kw == "output":
            arr = ts.ident()
            ts.expect("from")
            src_tok = ts.tok
            src = ts.ident()
            if src not in names:
                raise ts.error(f"unknown statement {src!r}", src_tok)
            outputs[arr] = src
            output_of[src] = arr
            _expect_end(ts)
        elif kw == "edge":
            name_tok = ts.tok
            name = ts.ident()
            ts.expect(":")
            rel_tok = ts.tok
            obj = parse_object(ts, params)
            _expect_end(ts)
            if not isinstance(obj, AffRelation):
                raise ts.error(f"edge {name} needs a relation", rel_tok)
            for end in (obj.in_tag, obj.out_tag):
                if end not in names:
                    raise ts.error(f"edge {name} refers to unknown statement {end!r}", rel_tok)
            for end, d in ((obj.in_tag, obj.in_dim), (obj.out_tag, obj.out_dim)):
                if stmts[names[end]].domain.dim != d:
                    raise ts.error(f"edge {name}: {end} has {stmts[names[end]].domain.dim} "
                                   f"dimensions, relation uses {d}", rel_tok)
            obj = obj.with_params(params)
            pieces = obj.split()
            if len(pieces) > MAX_DISJUNCTS:
                raise ts.error(f"edge {name} has {len(pieces)} disjuncts, more than {MAX_DISJUNCTS}",
                               name_tok)
            if any(e.name == name for e in edges) or any(e.name.startswith(name + ".") for e in edges):
                raise ts.error(f"edge {name!r} declared twice", name_tok)
            for k, piece in enumerate(pieces):
                ename = name if len(pieces) == 1 else f"{name}.{k + 1}"
                edges.append(Edge(ename, obj.in_tag, obj.out_tag, piece, tok.line))
        elif kw == "group":
            gname = ts.ident()
            ts.expect("{")
            members = []
            while True:
                m_tok = ts.tok
                m = ts.ident()
                if m not in names:
                    raise ts.error(f"unknown statement {m!r}", m_tok)
                members.append(m)
                if not ts.accept(","):
                    break
            ts.expect("}")
            _expect_end(ts)
            groups.append(Group(gname, tuple(members)))
        elif kw == "repeat":
            f_tok = ts.tok
            factor = ts.ident()
            if factor not in params.names:
                raise ts.error(f"repeat factor {factor!r} is not a parameter", f_tok)
            ts.expect("{")
            members = []
            while True:
                g_tok = ts.tok
                g = ts.ident()
                if g not in {x.name for x in groups}:
                    raise ts.error(f"unknown group {g!r}", g_tok)
                members.append(g)
                if not ts.accept(";"):
                    break
                if ts.at("}"):
                    break
            ts.expect("}")
            _expect_end(ts)
            repeats.append(Repeat(factor, tuple(members)))
        else:
            raise ts.error(f"unknown declaration {kw!r}", tok)
    if not any(not s.is_input for s in stmts):
        raise ParseError("program declares no statements")
    for k, s in enumerate(stmts):
        if s.name in output_of:
            role = OUTPUT if s.is_input else COMPUTE_OUTPUT
            stmts[k] = Statement(s.name, s.domain, role, s.tagged, s.line)
    seen = {}
    for g in groups:
        for m in g.members:
            if m in seen:
                raise ParseError(f"statement {m} is in groups {seen[m]} and {g.name}")
            seen[m] = g.name
    return ProgramSpec(params, stmts, edges, groups, repeats, outputs)


# ---- classification -------------------------------------------------------------------

@dataclass(frozen=True)
class ClassifiedEdge:
    edge: Edge
    cls: EdgeClass
    injective: bool        # one-to-one affine map, whatever the class
    dim_domain: int
    dim_image: int

    @property
    def name(self):
        return self.edge.name

    @property
    def src(self):
        return self.edge.src

    @property
    def dst(self):
        return self.edge.dst

    @property
    def relation(self):
        return self.edge.relation


@dataclass
class DataFlowGraph:
    spec: ProgramSpec
    vertices: list       # Statements
    edges: list          # ClassifiedEdges, declaration order
    dims: dict           # statement name -> dimension

    def vertex(self, name) -> Statement:
        for v in self.vertices:
            if v.name == name:
                return v
        raise KeyError(name)

    def family(self, cls: EdgeClass):
        return [e for e in self.edges if e.cls == cls]

    def restrict(self, names) -> "DataFlowGraph":
        """Subgraph on the named statements plus every input statement."""
        keep = set(names) | {v.name for v in self.vertices if v.is_input}
        return DataFlowGraph(self.spec, [v for v in self.vertices if v.name in keep],
                             [e for e in self.edges if e.src in keep and e.dst in keep],
                             {k: d for k, d in self.dims.items() if k in keep})


def _dim(s: IntSet) -> int:
    if s.is_empty():
        return -1
    try:
        return dim_of(s)
    except ValueError:
        return -1


def classify_edge(e: Edge, dst_dim: int) -> ClassifiedEdge:
    r = e.relation
    dd, di = _dim(domain(r)), _dim(image(r))
    fwd = as_affine_map(r)
    back = as_affine_map(inverse(r))
    injective = fwd is not None and back is not None
    if di < dst_dim:
        cls = EdgeClass.SKIPPED
    elif fwd is not None and is_invertible_map(fwd):
        cls = EdgeClass.INJECTIVE
    elif dd == di - 1:
        cls = EdgeClass.BROADCAST1
    elif 0 <= dd < di - 1:
        cls = EdgeClass.BROADCASTK
    else:
        cls = EdgeClass.NONE
    return ClassifiedEdge(e, cls, injective, dd, di)


def classify_edges(spec: ProgramSpec) -> DataFlowGraph:
    dims = {s.name: _dim(s.domain) for s in spec.statements}
    edges = [classify_edge(e, dims[e.dst]) for e in spec.edges]
    return DataFlowGraph(spec, list(spec.statements), edges, dims)


# ---- concrete CDAGs -------------------------------------------------------------------------

def _vid(name, point) -> str:
    return f"{name}[{','.join(str(int(x)) for x in point)}]"


def _rel_pairs(r: AffRelation, binding):
    pts = set()
    for t in concrete_systems(r.systems, r.params, binding):
        pts.update(sy.Enumerator(t).points())
    return sorted((p[:r.in_dim], p[r.in_dim:]) for p in pts)


def instantiate(spec: ProgramSpec, binding: dict, cap: int = VERTEX_CAP) -> CDAG:
    """One vertex per domain point, one edge per related pair."""
    missing = [p for p in spec.params.names if p not in binding]
    if missing:
        raise ValueError(f"parameter {missing[0]} is not bound")
    total = sum(card_at(s.domain, binding) for s in spec.statements)
    if total > cap:
        raise VertexCapExceeded(f"{total} vertices exceeds the cap of {cap}")
    ids, inputs, outputs = [], [], []
    for s in spec.statements:
        pts = set()
        for t in concrete_systems(s.domain.systems, s.domain.params, binding):
            pts.update(sy.Enumerator(t).points())
        for p in sorted(pts):
            v = _vid(s.name, p)
            ids.append(v)
            if s.is_input:
                inputs.append(v)
            if s.is_output:
                outputs.append(v)
    known = set(ids)
    edges = set()
    for e in spec.edges:
        for a, b in _rel_pairs(e.relation, binding):
            u, w = _vid(e.src, a), _vid(e.dst, b)
            if u not in known or w not in known:
                raise ValueError(f"edge {e.name} relates {u} -> {w} outside the declared domains")
            edges.add((u, w))
    return CDAG.build(ids, sorted(edges), inputs, outputs)
