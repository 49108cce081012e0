"""Path search and projection selection on a classified data-flow graph.

For each statement, injective circuits give reuse directions and broadcast
paths give reuse kernels.  Compatible sets of these subspaces are
accumulated until they span the statement's iteration space, then the
exponent LP turns them into a bound.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce

from . import asymbound as ab
from .dfgraph import DataFlowGraph, EdgeClass
from .paramlp import assemble_bound, base, build_lp, solve_plp
from .polyset import (IntSet, Subspace, as_affine_map, as_translation, card_at, compose,
                      dim_of, frontier, image, intersect, inverse, kernel_basis, subtract, union)

CIRCUIT, BROADCAST = "circuit", "broadcast"
MAX_LEN = 4
REF_PARAM = 100
REF_S = 10
COVER_PROBES = (7, 12)


@dataclass(frozen=True)
class Path:
    edges: tuple          # ClassifiedEdges in traversal order
    relation: object      # composed AffRelation
    kind: str

    @property
    def names(self):
        return tuple(e.name for e in self.edges)

    @property
    def vertices(self):
        return frozenset([self.edges[0].src] + [e.dst for e in self.edges])

    def __str__(self):
        return "(" + ",".join(self.names) + ")"


def _compose_path(edges):
    return reduce(lambda r, e: compose(e.relation, r), edges[1:], edges[0].relation)


def _dim(s: IntSet) -> int:
    if s.is_empty():
        return -1
    try:
        return dim_of(s)
    except ValueError:
        return -1


def enumerate_circuits(g: DataFlowGraph, v: str, max_len: int = MAX_LEN):
    """Simple circuits through v over injective edges, shortest first."""
    inj = [(k, e) for k, e in enumerate(g.edges) if e.cls == EdgeClass.INJECTIVE]
    found = []

    def walk(at, path, seen):
        for k, e in inj:
            if e.src != at:
                continue
            if e.dst == v:
                found.append(path + [(k, e)])
            elif e.dst not in seen and len(path) + 1 < max_len:
                walk(e.dst, path + [(k, e)], seen | {e.dst})

    walk(v, [], {v})
    found.sort(key=lambda p: (len(p), [k for k, _ in p]))
    for p in found:
        edges = tuple(e for _, e in p)
        yield Path(edges, _compose_path(edges), CIRCUIT)


def enumerate_broadcast_paths(g: DataFlowGraph, v: str, family: EdgeClass, max_len: int = MAX_LEN):
    """Cycle-free paths into v: one edge of the family, then injective edges."""
    inj = [(k, e) for k, e in enumerate(g.edges) if e.cls == EdgeClass.INJECTIVE]
    heads = [(k, e) for k, e in enumerate(g.edges) if e.cls == family]
    found = []

    def back(at, suffix, seen):
        for k, e in heads:
            if e.dst == at and e.src not in seen:
                found.append([(k, e)] + suffix)
        if len(suffix) + 1 >= max_len:
            return
        for k, e in inj:
            if e.dst == at and e.src not in seen:
                back(e.src, [(k, e)] + suffix, seen | {e.src})

    back(v, [], {v})
    found.sort(key=lambda p: (len(p), [k for k, _ in p]))
    for p in found:
        edges = tuple(e for _, e in p)
        yield Path(edges, _compose_path(edges), BROADCAST)


def broadcast_kernel(p: Path) -> Subspace | None:
    """Kernel of the inverse map of a broadcast path, if it is affine."""
    m = as_affine_map(inverse(p.relation))
    if m is None:
        return None
    k = kernel_basis(m, p.relation.out_dim)
    return k if k.dim else None


@dataclass(frozen=True)
class CliqueEntry:
    k: Subspace
    K: tuple              # Subspaces, acceptance order
    D: IntSet
    T: frozenset
    paths: tuple          # one Path per member of K
    order: int


@dataclass
class VertexAnalysis:
    name: str
    dim: int
    subspaces: list = field(default_factory=list)
    clique: list = field(default_factory=list)
    chosen: CliqueEntry | None = None
    lp: object = None
    solution: object = None
    tagged: tuple = ()
    complexity: ab.AsymBound | None = None


@dataclass
class Analyzer:
    g: DataFlowGraph
    max_len: int = MAX_LEN
    trace: list | None = None

    def log(self, msg):
        if self.trace is not None:
            self.trace.append(msg)

    # -- tagging ---------------------------------------------------------------------
    def _genuine_input(self, name) -> bool:
        v = self.g.vertex(name)
        return v.is_input and not v.tagged and not self._repeated(name)

    def _repeated(self, name) -> bool:
        # inputs of a repeated body are rewritten by earlier iterations
        return bool(self.g.spec.repeats)

    def _frontier_covered(self, v: str, p: Path) -> bool:
        """Frontier of the circuit is fed one-to-one from genuine inputs."""
        D = self.g.vertex(v).domain
        F = frontier(D, p.relation)
        feeds = [e for e in self.g.edges
                 if e.dst == v and e.injective and self._genuine_input(e.src)]
        if not feeds:
            return False
        fed = reduce(union, (image(e.relation) for e in feeds))
        rest = subtract(F, fed)
        params = D.params.names
        return all(card_at(rest, {n: b for n in params}) == 0 for b in COVER_PROBES)

    def is_tagged(self, v: str, p: Path) -> bool:
        if p.kind == BROADCAST:
            return not self._genuine_input(p.edges[0].src)
        return not self._frontier_covered(v, p)

    # -- solving -------------------------------------------------------------------------
    def solve(self, va: VertexAnalysis, entry: CliqueEntry):
        lp = build_lp(entry.D, list(entry.K))
        sol = solve_plp(lp)
        tagged = tuple(self.is_tagged(va.name, p) for p in entry.paths)
        return lp, sol, tagged, assemble_bound(entry.D, list(entry.K), sol, list(tagged))

    def _commit(self, va, entry):
        va.chosen = entry
        va.lp, va.solution, va.tagged, va.complexity = self.solve(va, entry)

    def try_path(self, va: VertexAnalysis, k2: Subspace, p: Path) -> bool:
        """Add the direction of p to every compatible entry; True once one spans."""
        if k2 in va.subspaces:
            self.log(f"{va.name}: {p} direction {k2} already seen")
            return False
        va.subspaces.append(k2)
        vdom = self.g.vertex(va.name).domain
        img = image(p.relation)
        entries = sorted(va.clique, key=lambda e: (-e.k.dim, e.order)) + [None]
        for ent in entries:
            k = ent.k if ent else Subspace(k2.n)
            K = ent.K if ent else ()
            if (k + k2).dim <= k.dim:
                continue
            b = base(list(K) + [k2], k2.n)
            if b is None:
                continue
            D = ent.D if ent else vdom
            D2 = intersect(img, D)
            if _dim(D2) != _dim(D):
                continue
            new = CliqueEntry(k + k2, K + (k2,), D2, (ent.T if ent else frozenset()) | p.vertices,
                              (ent.paths if ent else ()) + (p,), len(va.clique))
            va.clique.append(new)
            self.log(f"{va.name}: entry {len(va.clique) - 1} = {_entry_str(new)}")
            if new.k.dim >= va.dim and _orthogonal(b):
                self._commit(va, new)
                self.log(f"{va.name}: spanning orthogonal entry {new.order} chosen")
                return True
        return False

    def best(self, va: VertexAnalysis):
        if not va.clique:
            va.complexity = ab.ZERO
            self.log(f"{va.name}: no usable paths")
            return
        ref = {n: REF_PARAM for n in self.g.spec.params.names}
        ref[ab.CACHE] = REF_S

        def key(e):
            *_, bound = self.solve(va, e)
            return (_dim(e.D), e.k.dim, -sum(k.dim for k in e.K), ab.eval_at(bound, ref),
                    -len(e.T), -e.order)

        chosen = max(va.clique, key=key)
        self._commit(va, chosen)
        self.log(f"{va.name}: best entry {chosen.order}")

    def analyze_vertex(self, name: str) -> VertexAnalysis:
        st = self.g.vertex(name)
        va = VertexAnalysis(name, self.g.dims[name])
        if st.is_input or va.dim <= 0:
            va.complexity = ab.ZERO
            return va
        for p in enumerate_circuits(self.g, name, self.max_len):
            b = as_translation(p.relation)
            if b is None:
                self.log(f"{name}: circuit {p} rejected, not a translation")
                continue
            if _dim(image(p.relation)) < va.dim:
                self.log(f"{name}: circuit {p} rejected, image too small")
                continue
            self.log(f"{name}: circuit {p} direction {b}")
            if self.try_path(va, Subspace.span([b], len(b)), p):
                return va
        for fam in (EdgeClass.BROADCAST1, EdgeClass.BROADCASTK):
            for p in enumerate_broadcast_paths(self.g, name, fam, self.max_len):
                k = broadcast_kernel(p)
                if k is None:
                    self.log(f"{name}: broadcast {p} rejected, inverse is not affine")
                    continue
                if _dim(image(p.relation)) < va.dim:
                    self.log(f"{name}: broadcast {p} rejected, image too small")
                    continue
                self.log(f"{name}: broadcast {p} kernel {k}")
                if self.try_path(va, k, p):
                    return va
        self.best(va)
        return va


def _orthogonal(b) -> bool:
    return all(sum(Fraction(x) * y for x, y in zip(u, w)) == 0
               for i, u in enumerate(b) for w in b[i + 1:])


def _entry_str(e: CliqueEntry) -> str:
    return "{" + ", ".join(str(k) for k in e.K) + "} via " + " ".join(str(p) for p in e.paths)


@dataclass
class GraphAnalysis:
    vertices: dict        # name -> VertexAnalysis
    total: ab.AsymBound


def analyze_graph(g: DataFlowGraph, max_len: int = MAX_LEN, trace: list | None = None,
                  names=None) -> GraphAnalysis:
    """Per-vertex bounds and their simplified sum."""
    an = Analyzer(g, max_len, trace)
    out = {}
    total = ab.ZERO
    for v in sorted(names if names is not None else [v.name for v in g.vertices]):
        va = an.analyze_vertex(v)
        out[v] = va
        total = ab.add(total, va.complexity)
    return GraphAnalysis(out, ab.simplify(total))


@dataclass
class GroupResult:
    name: str
    members: tuple
    analysis: GraphAnalysis


@dataclass
class ProgramAnalysis:
    groups: list
    total: ab.AsymBound
    io_count: ab.AsymBound


def analyze_program(g: DataFlowGraph, max_len: int = MAX_LEN, trace: list | None = None):
    """Analyze each statement group separately and sum (with repeat factors)."""
    spec = g.spec
    compute = [v.name for v in g.vertices if not v.is_input]
    grouped = [m for grp in spec.groups for m in grp.members]
    groups = [(grp.name, grp.members) for grp in spec.groups]
    rest = tuple(v for v in compute if v not in grouped)
    if rest:
        groups.append(("main" if not groups else "rest", rest))
    results = []
    for name, members in groups:
        sub = g.restrict(members) if spec.groups else g
        results.append(GroupResult(name, tuple(members), analyze_graph(sub, max_len, trace, members)))
    by_name = {r.name: r for r in results}
    total = ab.ZERO
    repeated = set()
    for rep in spec.repeats:
        inner = ab.ZERO
        for gname in rep.groups:
            inner = ab.add(inner, by_name[gname].analysis.total)
            repeated.add(gname)
        total = ab.add(total, ab.scale_by(inner, ab.Monomial.of({rep.factor: 1})))
    for r in results:
        if r.name not in repeated:
            total = ab.add(total, r.analysis.total)
    return ProgramAnalysis(results, ab.simplify(total), _io_count(g))


def _io_count(g: DataFlowGraph) -> ab.AsymBound:
    from .paramlp import growth_monomials
    from .polyset import card_leading
    monos = []
    for v in g.vertices:
        if v.is_input or v.is_output:
            monos.extend(growth_monomials(card_leading(v.domain)))
    return ab.bound(monos) if monos else ab.ZERO
