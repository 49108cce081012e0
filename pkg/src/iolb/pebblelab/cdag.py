"""Computational DAGs with input/output labels, plus the line-oriented file format.

    v <id> [input] [output]
    e <src> <dst>
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field


class CDAGError(ValueError):
    pass


@dataclass
class CDAG:
    ids: list
    inputs: frozenset = frozenset()     # vertex indices
    outputs: frozenset = frozenset()
    edges: list = field(default_factory=list)  # (src index, dst index)

    def __post_init__(self):
        n = len(self.ids)
        self.index = {v: k for k, v in enumerate(self.ids)}
        if len(self.index) != n:
            raise CDAGError("duplicate vertex id")
        self.edges = sorted(set((int(a), int(b)) for a, b in self.edges))
        self.preds = [[] for _ in range(n)]
        self.succs = [[] for _ in range(n)]
        for a, b in self.edges:
            if a == b:
                raise CDAGError(f"self loop on {self.ids[a]}")
            self.succs[a].append(b)
            self.preds[b].append(a)
        self.inputs = frozenset(self.inputs)
        self.outputs = frozenset(self.outputs)
        for v in self.inputs:
            if self.preds[v]:
                raise CDAGError(f"input {self.ids[v]} has incoming edges")
        self.topo = self._toposort()
        self.pred_mask = [sum(1 << p for p in ps) for ps in self.preds]
        self.succ_mask = [sum(1 << s for s in ss) for ss in self.succs]

    @classmethod
    def build(cls, ids, edges, inputs=(), outputs=()):
        ids = list(ids)
        idx = {v: k for k, v in enumerate(ids)}
        return cls(ids, frozenset(idx[v] for v in inputs), frozenset(idx[v] for v in outputs),
                   [(idx[a], idx[b]) for a, b in edges])

    def _toposort(self):
        indeg = [len(p) for p in self.preds]
        order = [v for v in range(len(self.ids)) if indeg[v] == 0]
        k = 0
        while k < len(order):
            v = order[k]
            k += 1
            for w in self.succs[v]:
                indeg[w] -= 1
                if indeg[w] == 0:
                    order.append(w)
        if len(order) != len(self.ids):
            raise CDAGError("graph has a cycle")
        return order

    def __len__(self):
        return len(self.ids)

    @property
    def compute(self):
        return [v for v in range(len(self.ids)) if v not in self.inputs]

    def sources(self):
        return [v for v in range(len(self.ids)) if not self.preds[v]]

    def sinks(self):
        return [v for v in range(len(self.ids)) if not self.succs[v]]

    def is_standard(self) -> bool:
        """Every source is an input and every sink an output."""
        return all(v in self.inputs for v in self.sources()) and \
            all(v in self.outputs for v in self.sinks())

    def ancestors(self, vs) -> set:
        seen = set()
        stack = list(vs)
        while stack:
            v = stack.pop()
            for p in self.preds[v]:
                if p not in seen:
                    seen.add(p)
                    stack.append(p)
        return seen

    def with_labels(self, inputs, outputs) -> "CDAG":
        return CDAG(list(self.ids), frozenset(inputs), frozenset(outputs), list(self.edges))

    def standardized(self) -> "CDAG":
        """Sources become inputs and sinks become outputs."""
        return self.with_labels(self.inputs | set(self.sources()), self.outputs | set(self.sinks()))

    def induced(self, vertices) -> "CDAG":
        keep = sorted(set(vertices))
        pos = {v: k for k, v in enumerate(keep)}
        edges = [(pos[a], pos[b]) for a, b in self.edges if a in pos and b in pos]
        return CDAG([self.ids[v] for v in keep],
                    frozenset(pos[v] for v in self.inputs if v in pos),
                    frozenset(pos[v] for v in self.outputs if v in pos), edges)

    def to_text(self) -> str:
        lines = []
        for k, v in enumerate(self.ids):
            flags = (" input" if k in self.inputs else "") + (" output" if k in self.outputs else "")
            lines.append(f"v {v}{flags}")
        for a, b in self.edges:
            lines.append(f"e {self.ids[a]} {self.ids[b]}")
        return "\n".join(lines) + "\n"


def parse_cdag(text: str) -> CDAG:
    ids, inputs, outputs, edges = [], set(), set(), []
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "v" and len(parts) >= 2:
            vid = parts[1]
            if vid in seen:
                raise CDAGError(f"line {lineno}: duplicate vertex {vid}")
            seen.add(vid)
            ids.append(vid)
            for flag in parts[2:]:
                if flag == "input":
                    inputs.add(vid)
                elif flag == "output":
                    outputs.add(vid)
                else:
                    raise CDAGError(f"line {lineno}: unknown flag {flag!r}")
        elif parts[0] == "e" and len(parts) == 3:
            edges.append((parts[1], parts[2]))
        else:
            raise CDAGError(f"line {lineno}: cannot parse {line!r}")
    for a, b in edges:
        for v in (a, b):
            if v not in seen:
                raise CDAGError(f"edge mentions unknown vertex {v}")
    return CDAG.build(ids, edges, inputs, outputs)


def random_dag(n: int, rng: random.Random, p: float = 0.35, max_preds: int = 3,
               standard: bool = True) -> CDAG:
    """Random DAG on n vertices in topological id order, without isolated vertices.

    With standard=True sources are inputs and sinks outputs; otherwise the
    labels are random subsets of sources and sinks.
    """
    edges = []
    for b in range(1, n):
        cand = [a for a in range(b) if rng.random() < p]
        rng.shuffle(cand)
        for a in cand[:max_preds]:
            edges.append((a, b))
    touched = {v for e in edges for v in e}
    for v in range(n if n > 1 else 0):
        if v in touched:
            continue
        if v:
            edges.append((rng.randrange(v), v))
        else:
            room = [w for w in range(1, n) if sum(1 for _, b in edges if b == w) < max_preds]
            if room:
                edges.append((0, rng.choice(room)))
        touched.update(edges[-1] if edges else ())
    ids = [str(k + 1) for k in range(n)]
    g = CDAG(ids, frozenset(), frozenset(), edges)
    if standard:
        return g.standardized()
    ins = [v for v in g.sources() if rng.random() < 0.5]
    outs = [v for v in g.sinks() if rng.random() < 0.5]
    return g.with_labels(ins, outs)
