"""Red/blue pebble game: validation of calculations and exact optimal I/O.

Rules: R1 load (blue -> red), R2 store (red -> blue), R3 compute (all
predecessors red), R4 delete a red pebble.  Variant "nr" forbids firing a
vertex twice.  With slide enabled, R3 on a full fast memory may move the
red pebble of a predecessor onto the computed vertex; in a move list this
is written as R3 immediately followed by R4 of that predecessor.
"""
from __future__ import annotations

import heapq
import re
from dataclasses import dataclass, field
from itertools import count

from .cdag import CDAG

STD, NR = "std", "nr"


class CalculationError(ValueError):
    def __init__(self, index, reason):
        self.index, self.reason = index, reason
        super().__init__(f"move {index}: {reason}")


class CapExceeded(ValueError):
    pass


class Infeasible(ValueError):
    pass


@dataclass(frozen=True)
class Move:
    kind: str   # R1, R2, R3, R3NR, R4
    vertex: str

    def __str__(self):
        return f"{self.kind}_{self.vertex}"


@dataclass
class Calculation:
    moves: list = field(default_factory=list)

    @property
    def io_count(self) -> int:
        return sum(1 for m in self.moves if m.kind in ("R1", "R2"))

    def __str__(self):
        return "{" + ", ".join(str(m) for m in self.moves) + "}"

    def __len__(self):
        return len(self.moves)


_MOVE_RE = re.compile(r"^(R1|R2|R3NR|R3|R4)_?\{?([^{}]+?)\}?$")


def parse_moves(text: str) -> Calculation:
    """Parse '{R1_2, R3_{10}, ...}' (braces and LaTeX subscripts optional)."""
    body = text.strip()
    if body.startswith("{") and body.endswith("}"):
        body = body[1:-1]
    moves = []
    for tok in re.split(r"[,\s]+", body):
        tok = tok.strip().replace("$", "")
        if not tok:
            continue
        m = _MOVE_RE.match(tok)
        if not m:
            raise ValueError(f"bad move {tok!r}")
        moves.append(Move(m.group(1), m.group(2)))
    return Calculation(moves)


def _needs_fired(c: CDAG, variant: str) -> bool:
    return variant == NR or not c.is_standard()


def validate_calculation(c: CDAG, S: int, calc: Calculation, variant: str = STD,
                         allow_slide: bool = True, implicit_evict: bool = False,
                         trace: list | None = None) -> int:
    """Replay calc and return its I/O count, or raise CalculationError.

    implicit_evict lets an over-full placement drop a red pebble that is
    backed by a blue pebble or dead, choosing one that is not needed before
    it is reloaded.  This accepts move lists that leave deletions implicit;
    it only inserts R4 moves, so the I/O count is unaffected.  When a trace
    list is given, the effective move sequence is appended to it.
    """
    if S < 1:
        raise ValueError("S must be >= 1")
    moves = calc.moves
    red: dict = {}          # vertex -> time placed (for LRU)
    blue = set(c.inputs)
    fired = set()
    io = 0
    clock = count()
    idx = c.index
    i = 0

    def emit(kind, v):
        if trace is not None:
            trace.append(Move(kind, c.ids[v]))

    def vertex(k):
        name = moves[k].vertex
        if name not in idx:
            raise CalculationError(k, f"unknown vertex {name}")
        return idx[name]

    def evict_for(k, protect):
        cands = []
        for u, t in red.items():
            if u in protect:
                continue
            first = None
            for j in range(k + 1, len(moves)):
                m = moves[j]
                w = idx.get(m.vertex)
                if m.kind in ("R1", "R4") and w == u:
                    first = m.kind
                    break
                if m.kind == "R2" and w == u:
                    first = "need"
                    break
                if m.kind in ("R3", "R3NR") and w is not None and u in c.preds[w]:
                    first = "need"
                    break
            if first == "need":
                continue
            if first == "R1" and u not in blue:
                continue
            if first is None and u in c.outputs and u not in blue:
                continue
            upcoming = j if first == "R1" else None
            cands.append((0 if upcoming is not None else 1, upcoming or 0, t, u))
        if not cands:
            raise CalculationError(k, "no red pebble available (S exceeded)")
        u = min(cands)[3]
        del red[u]
        emit("R4", u)

    while i < len(moves):
        m = moves[i]
        v = vertex(i)
        kind = m.kind
        if kind == "R1":
            if v not in blue:
                raise CalculationError(i, f"R1 on {m.vertex} without a blue pebble")
            if v in red:
                if not implicit_evict:
                    raise CalculationError(i, f"R1 on {m.vertex} which is already red")
            else:
                if len(red) >= S:
                    if not implicit_evict:
                        raise CalculationError(i, "more than S red pebbles")
                    evict_for(i, set())
                red[v] = next(clock)
            io += 1
            emit("R1", v)
        elif kind == "R2":
            if v not in red:
                raise CalculationError(i, f"R2 on {m.vertex} without a red pebble")
            blue.add(v)
            io += 1
            emit("R2", v)
        elif kind in ("R3", "R3NR"):
            if v in c.inputs:
                raise CalculationError(i, f"R3 on input {m.vertex}")
            missing = [c.ids[p] for p in c.preds[v] if p not in red]
            if missing:
                raise CalculationError(i, f"R3 on {m.vertex}: predecessor {missing[0]} not red")
            if (variant == NR or kind == "R3NR") and v in fired:
                raise CalculationError(i, f"R3 on {m.vertex}: vertex already fired (no recompute)")
            if v in red:
                raise CalculationError(i, f"R3 on {m.vertex} which is already red")
            emit("R3", v)
            if len(red) >= S:
                nxt = moves[i + 1] if i + 1 < len(moves) else None
                p = idx.get(nxt.vertex) if nxt is not None else None
                if allow_slide and nxt is not None and nxt.kind == "R4" and p in c.preds[v] and p in red:
                    del red[p]
                    emit("R4", p)
                    i += 1
                elif implicit_evict:
                    evict_for(i, set(c.preds[v]))
                else:
                    raise CalculationError(i, "more than S red pebbles")
            red[v] = next(clock)
            fired.add(v)
        elif kind == "R4":
            if v not in red:
                if not implicit_evict:
                    raise CalculationError(i, f"R4 on {m.vertex} without a red pebble")
            else:
                del red[v]
                emit("R4", v)
        else:
            raise CalculationError(i, f"unknown move kind {kind}")
        i += 1
    missing = [c.ids[v] for v in sorted(c.outputs) if v not in blue]
    if missing:
        raise CalculationError(len(moves), f"output {missing[0]} has no blue pebble")
    if _needs_fired(c, variant):
        unfired = [c.ids[v] for v in c.compute if v not in fired]
        if unfired:
            raise CalculationError(len(moves), f"vertex {unfired[0]} never fired")
    return io


# ---- exact search ----------------------------------------------------------------

@dataclass
class MinIOResult:
    q: int
    optimal: bool
    witness: Calculation
    expanded: int = 0


def _popcount(x: int) -> int:
    return bin(x).count("1")


def _bits(x: int):
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def min_io(c: CDAG, S: int, variant: str = STD, allow_slide: bool = True,
           budget: int = 2_000_000, vertex_cap: int = 14, s_cap: int = 6) -> MinIOResult:
    """Optimal I/O count by A* search over pebble configurations.

    States are (red, blue, fired) bitsets.  The heuristic counts outputs
    without a blue pebble plus inputs that still feed an unfired vertex and
    are not red; both need a distinct I/O move, so the bound is admissible
    and consistent.  When more than ``budget`` states are expanded the
    result falls back to a greedy schedule flagged ``optimal=False``.
    """
    n = len(c)
    if n > vertex_cap:
        raise CapExceeded(f"{n} vertices exceeds the cap of {vertex_cap}")
    if S > s_cap:
        raise CapExceeded(f"S={S} exceeds the cap of {s_cap}")
    if n == 0:
        return MinIOResult(0, True, Calculation())
    nr = variant == NR
    # Tracking fired vertices is implied for standard CDAGs (every vertex
    # reaches an output) and sharpens the heuristic, so it is always on.
    track = True
    in_mask = sum(1 << v for v in c.inputs)
    out_mask = sum(1 << v for v in c.outputs)
    comp_mask = ((1 << n) - 1) & ~in_mask
    pm, sm = c.pred_mask, c.succ_mask
    for v in c.compute:
        if len(c.preds[v]) > S or (len(c.preds[v]) == S and not allow_slide):
            raise Infeasible(f"vertex {c.ids[v]} has more predecessors than fit in fast memory")
    inputs = sorted(c.inputs)

    def canon(red, blue, fired, drops):
        if nr:
            for u in _bits(red):
                if not (sm[u] & ~fired) and not (out_mask >> u & 1 and not blue >> u & 1):
                    red &= ~(1 << u)
                    drops.append(u)
            for u in _bits(blue):
                if not (sm[u] & ~fired) and not out_mask >> u & 1:
                    blue &= ~(1 << u)
        return red, blue, fired

    def h(state):
        red, blue, fired = state
        v = _popcount(out_mask & ~blue)
        if track:
            for u in inputs:
                if not red >> u & 1 and sm[u] & ~fired:
                    v += 1
        return v

    def goal(state):
        red, blue, fired = state
        return (blue & out_mask) == out_mask and (not track or (fired & comp_mask) == comp_mask)

    start = canon(0, in_mask, 0, [])
    dist = {start: 0}
    parent = {start: None}
    tie = count()
    heap = [(h(start), 0, next(tie), start)]
    expanded = 0
    while heap:
        f, g, _, state = heapq.heappop(heap)
        if dist.get(state, None) != g:
            continue
        if goal(state):
            return MinIOResult(g, True, _witness(c, parent, state), expanded)
        expanded += 1
        if expanded > budget:
            q, calc = greedy_calculation(c, S, variant, allow_slide)
            return MinIOResult(q, False, calc, expanded)
        red, blue, fired = state
        nred = _popcount(red)
        succ = []
        if nred >= S:
            for u in _bits(red):
                succ.append((0, red & ~(1 << u), blue, fired, [("R4", u)]))
        else:
            for u in _bits(blue & ~red):
                useful = (sm[u] & ~fired) if nr else sm[u]
                if useful:
                    succ.append((1, red | 1 << u, blue, fired, [("R1", u)]))
        for u in _bits(red & ~blue):
            useful = out_mask >> u & 1 or ((sm[u] & ~fired) if nr else sm[u])
            if useful:
                succ.append((1, red, blue | 1 << u, fired, [("R2", u)]))
        cand = comp_mask & ~red
        if nr:
            cand &= ~fired
        for v in _bits(cand):
            if pm[v] & ~red:
                continue
            nf = (fired | 1 << v) if track else 0
            if nred < S:
                succ.append((0, red | 1 << v, blue, nf, [("R3", v)]))
            elif allow_slide:
                for p in _bits(pm[v]):
                    succ.append((0, (red & ~(1 << p)) | 1 << v, blue, nf, [("R3", v), ("R4", p)]))
        for cost, r2, b2, f2, mv in succ:
            drops = []
            nxt = canon(r2, b2, f2, drops)
            if drops:
                mv = mv + [("R4", u) for u in drops]
            ng = g + cost
            if ng < dist.get(nxt, 1 << 60):
                dist[nxt] = ng
                parent[nxt] = (state, mv)
                heapq.heappush(heap, (ng + h(nxt), ng, next(tie), nxt))
    raise Infeasible("no complete calculation exists")


def _witness(c, parent, state):
    seq = []
    while parent[state] is not None:
        prev, mv = parent[state]
        seq.append(mv)
        state = prev
    moves = []
    for mv in reversed(seq):
        moves.extend(Move(k, c.ids[v]) for k, v in mv)
    return Calculation(moves)


def greedy_calculation(c: CDAG, S: int, variant: str = STD, allow_slide: bool = True):
    """A valid (usually suboptimal) calculation: topological order, furthest-use eviction."""
    order = [v for v in c.topo if v not in c.inputs]
    pos = {v: k for k, v in enumerate(order)}
    red: list = []
    blue = set(c.inputs)
    done = set()
    moves = []

    def next_use(u, after):
        uses = [pos[w] for w in c.succs[u] if w not in done and pos[w] > after]
        return min(uses) if uses else None

    def needed_later(u, after):
        return next_use(u, after) is not None or (u in c.outputs and u not in blue)

    def evict(after, protect):
        cands = [u for u in red if u not in protect]
        if not cands:
            return False
        far = max(cands, key=lambda u: (next_use(u, after) is None, next_use(u, after) or 0))
        if needed_later(far, after) and far not in blue:
            moves.append(Move("R2", c.ids[far]))
            blue.add(far)
        red.remove(far)
        moves.append(Move("R4", c.ids[far]))
        return True

    for k, v in enumerate(order):
        preds = c.preds[v]
        for p in preds:
            if p not in red:
                if len(red) >= S and not evict(k - 1, set(preds)):
                    raise Infeasible("greedy schedule ran out of red pebbles")
                moves.append(Move("R1", c.ids[p]))
                red.append(p)
        if len(red) >= S:
            if not evict(k, set(preds)):
                if not allow_slide or not preds:
                    raise Infeasible("greedy schedule ran out of red pebbles")
                p = max(preds, key=lambda u: (next_use(u, k) is None, next_use(u, k) or 0))
                if needed_later(p, k) and p not in blue:
                    moves.append(Move("R2", c.ids[p]))
                    blue.add(p)
                moves.append(Move("R3", c.ids[v]))
                moves.append(Move("R4", c.ids[p]))
                red.remove(p)
                red.append(v)
                done.add(v)
                continue
        moves.append(Move("R3", c.ids[v]))
        red.append(v)
        done.add(v)
        # drop dead pebbles eagerly
        for u in list(red):
            if not needed_later(u, k) and u != v:
                red.remove(u)
                moves.append(Move("R4", c.ids[u]))
    for v in sorted(c.outputs):
        if v not in blue:
            if v not in red:
                raise Infeasible("output lost")
            moves.append(Move("R2", c.ids[v]))
            blue.add(v)
    calc = Calculation(moves)
    q = validate_calculation(c, S, calc, variant, allow_slide)
    return q, calc
