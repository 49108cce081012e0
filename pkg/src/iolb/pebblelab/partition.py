"""Vertex partitions tied to pebble-game calculations.

Two validity notions are supported.  "hk" partitions cover every vertex and
bound, per subset, the smallest dominator and the minimum set.  "nr"
partitions cover the non-input vertices and bound the In and Out sets.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import networkx as nx

from .cdag import CDAG
from .game import NR, Calculation, validate_calculation

HK = "hk"
HMIN_CAP = 10


@dataclass(frozen=True)
class Partition:
    subsets: tuple  # tuple of frozensets of vertex ids

    @property
    def h(self) -> int:
        return len(self.subsets)

    @classmethod
    def of(cls, subsets) -> "Partition":
        return cls(tuple(frozenset(s) for s in subsets))


@dataclass
class Verdict:
    ok: bool
    violations: list = field(default_factory=list)

    def __bool__(self):
        return self.ok


def partition_from_calculation(c: CDAG, S: int, calc: Calculation) -> Partition:
    """Cut a no-recompute calculation into blocks of S I/O moves each.

    Block i holds the moves made after i*S I/O moves, with the last block
    absorbing the remainder; V_i is the set of vertices fired in block i.
    Empty blocks are dropped.
    """
    trace = []
    q = validate_calculation(c, S, calc, NR, trace=trace)
    h = max(1, -(-q // S))
    blocks = [[] for _ in range(h)]
    io = 0
    for m in trace:
        if m.kind in ("R3", "R3NR"):
            blocks[min(io // S, h - 1)].append(m.vertex)
        if m.kind in ("R1", "R2"):
            io += 1
    return Partition.of(b for b in blocks if b)


def _mask(c, ids):
    return sum(1 << c.index[v] for v in ids)


def _ancestors_mask(c, m):
    seen = 0
    stack = [v for v in range(len(c)) if m >> v & 1]
    while stack:
        v = stack.pop()
        p = c.pred_mask[v] & ~seen
        seen |= p
        stack.extend(u for u in range(len(c)) if p >> u & 1)
    return seen


def min_dominator(c: CDAG, block: int) -> int:
    """Size of the smallest vertex set meeting every path from I into the block.

    Computed as a maximum number of vertex-disjoint paths (Menger), with
    every vertex, including inputs and block members, cuttable.
    """
    inputs = _mask(c, [c.ids[v] for v in c.inputs])
    relevant = _ancestors_mask(c, block) | block
    if not relevant & inputs:
        return 0
    g = nx.DiGraph()
    for v in range(len(c)):
        if not relevant >> v & 1:
            continue
        g.add_edge(("i", v), ("o", v), capacity=1)
        if inputs >> v & 1:
            g.add_edge("src", ("i", v))
        if block >> v & 1:
            g.add_edge(("o", v), "dst")
        for w in c.succs[v]:
            if relevant >> w & 1:
                g.add_edge(("o", v), ("i", w))
    return int(nx.maximum_flow_value(g, "src", "dst"))


def min_dominator_bruteforce(c: CDAG, block: int, limit: int = 20) -> int:
    """Reference check of min_dominator by subset enumeration."""
    from itertools import combinations

    cand = [v for v in range(len(c)) if (_ancestors_mask(c, block) | block) >> v & 1]
    if len(cand) > limit:
        raise ValueError(f"{len(cand)} candidate dominator vertices exceeds {limit}")
    for k in range(len(cand) + 1):
        for d in combinations(cand, k):
            if _dominates(c, block, sum(1 << v for v in d)):
                return k
    return len(cand)


def _dominates(c, block, d):
    stack = [v for v in c.inputs if not d >> v & 1]
    seen = set(stack)
    while stack:
        v = stack.pop()
        if block >> v & 1:
            return False
        for w in c.succs[v]:
            if w not in seen and not d >> w & 1:
                seen.add(w)
                stack.append(w)
    return True


class _Masks:
    def __init__(self, c: CDAG):
        self.c = c
        n = len(c)
        self.out = sum(1 << v for v in c.outputs)
        self.inp = sum(1 << v for v in c.inputs)
        self.pm, self.sm = c.pred_mask, c.succ_mask
        self.n = n

    def union(self, masks, block):
        r = 0
        b = block
        while b:
            low = b & -b
            r |= masks[low.bit_length() - 1]
            b ^= low
        return r

    def in_set(self, block):
        return self.union(self.pm, block) & ~block

    def out_set(self, block):
        b, r = block, 0
        while b:
            low = b & -b
            v = low.bit_length() - 1
            if self.out >> v & 1 or self.sm[v] & ~block:
                r |= low
            b ^= low
        return r

    def min_set(self, block):
        b, r = block, 0
        while b:
            low = b & -b
            v = low.bit_length() - 1
            if not self.sm[v] & block:
                r |= low
            b ^= low
        return r


def _pop(x):
    return bin(x).count("1")


def _block_violations(m: _Masks, block: int, bound: int, definition: str):
    c = m.c
    out = []
    if definition == NR:
        n_in, n_out = _pop(m.in_set(block)), _pop(m.out_set(block))
        if n_in > bound:
            out.append(("P3", f"|In| = {n_in} > {bound}"))
        if n_out > bound:
            out.append(("P4", f"|Out| = {n_out} > {bound}"))
    else:
        quick = m.in_set(block) | (block & m.inp)
        if _pop(quick) > bound:
            d = min_dominator(c, block)
            if d > bound:
                out.append(("P3", f"smallest dominator has {d} > {bound} vertices"))
        n_min = _pop(m.min_set(block))
        if n_min > bound:
            out.append(("P4", f"|Min| = {n_min} > {bound}"))
    return out


def verify_partition(c: CDAG, part: Partition, bound: int, definition: str = NR) -> Verdict:
    """Check P1 to P4 of the chosen partition definition with the given bound."""
    m = _Masks(c)
    violations = []
    required = set(range(len(c))) if definition == HK else set(c.compute)
    blocks = []
    seen = set()
    for k, s in enumerate(part.subsets):
        unknown = [v for v in s if v not in c.index]
        if unknown:
            violations.append(("P1", f"subset {k} has unknown vertex {unknown[0]}"))
            continue
        idx = {c.index[v] for v in s}
        if idx & seen:
            violations.append(("P1", f"subset {k} overlaps an earlier subset"))
        if definition == NR and idx & c.inputs:
            violations.append(("P1", f"subset {k} contains an input vertex"))
        if not idx:
            violations.append(("P1", f"subset {k} is empty"))
        seen |= idx
        blocks.append(sum(1 << v for v in idx))
    missing = sorted(required - seen)
    if missing:
        violations.append(("P1", f"vertex {c.ids[missing[0]]} is not covered"))
    owner = {}
    for k, b in enumerate(blocks):
        for v in range(len(c)):
            if b >> v & 1:
                owner.setdefault(v, k)
    q = nx.DiGraph()
    q.add_nodes_from(range(len(blocks)))
    for a, b in c.edges:
        if a in owner and b in owner and owner[a] != owner[b]:
            q.add_edge(owner[a], owner[b])
    if not nx.is_directed_acyclic_graph(q):
        cyc = nx.find_cycle(q)
        violations.append(("P2", f"cyclic dependence between subsets {cyc[0][0]} and {cyc[0][1]}"))
    for k, b in enumerate(blocks):
        for prop, why in _block_violations(m, b, bound, definition):
            violations.append((prop, f"subset {k}: {why}"))
    return Verdict(not violations, violations)


def _downsets_above(order, pred_u, x):
    """Every down-set strictly containing x, by include/exclude in topological order."""
    out = []
    stack = [(0, x)]
    while stack:
        i, y = stack.pop()
        if i == len(order):
            if y != x:
                out.append(y)
            continue
        bit = 1 << order[i]
        stack.append((i + 1, y))
        if not y & bit and not pred_u[order[i]] & ~y:
            stack.append((i + 1, y | bit))
    return out


def hmin_bruteforce(c: CDAG, bound: int, definition: str = NR, cap: int = HMIN_CAP) -> int:
    """Minimal number of subsets of a valid partition with the given bound.

    Exhaustive: a valid partition is a chain of down-sets (sets closed under
    predecessors), each step adding one valid subset, so breadth-first
    search over down-sets from the empty set to the full set finds the
    minimum exactly.
    """
    m = _Masks(c)
    universe = (1 << len(c)) - 1
    if definition == NR:
        universe &= ~m.inp
    if len(c.compute) > cap:
        raise ValueError(f"{len(c.compute)} non-input vertices exceeds the cap of {cap}")
    if universe == 0:
        return 0
    order = [v for v in c.topo if universe >> v & 1]
    pred_u = [p & universe for p in m.pm]
    valid = {}

    def ok(block):
        r = valid.get(block)
        if r is None:
            r = not _block_violations(m, block, bound, definition)
            valid[block] = r
        return r

    frontier = [0]
    seen = {0}
    depth = 0
    while frontier:
        depth += 1
        nxt = []
        for x in frontier:
            for y in _downsets_above(order, pred_u, x):
                if y in seen or not ok(y & ~x):
                    continue
                if y == universe:
                    return depth
                seen.add(y)
                nxt.append(y)
        frontier = nxt
    raise ValueError("no valid partition exists for this bound")
