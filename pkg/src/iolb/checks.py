"""Randomized cross-validation of the pebble-game theorems and the analyzer.

Each suite draws small DAGs from a seeded generator, solves them exactly
and records every instance on which an inequality fails.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from importlib.resources import files

from . import asymbound as ab
from .dfgraph import classify_edges, instantiate, parse_program
from .pathfind import analyze_program
from .pebblelab import (HK, NR, STD, TagSet, decompose, hmin_bruteforce, min_io,
                        partition_from_calculation, random_dag, tag, verify_partition)

# Omega bounds carry no constants; the analyzer value may exceed the exact
# optimum by this factor at desk-scale bindings.
ORACLE_SLACK = 4
ORACLE_CASES = (
    ("jacobi1d", {"T": 3, "N": 5}, 3),
    ("nbody", {"N": 3}, 3),
)


@dataclass
class SuiteResult:
    name: str
    cases: int = 0
    skipped: int = 0
    violations: list = field(default_factory=list)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.violations

    def line(self, timing: bool = True) -> str:
        status = "pass" if self.ok else "FAIL"
        extra = f", {self.skipped} skipped" if self.skipped else ""
        text = f"{status}  {self.name}: {self.cases} instances{extra}, {len(self.violations)} violations"
        return text + (f" ({self.seconds:.1f} s)" if timing else "")


def _bound_for(S: int, mutate: bool) -> int:
    # the mutated checker is too strict, so the lemmas must break
    return max(1, S // 2) if mutate else 2 * S


def _exact(g, S, variant, **kw):
    r = min_io(g, S, variant, **kw)
    return r if r.optimal else None


def lemma_suite(rng: random.Random, count: int = 200, mutate: bool = False) -> SuiteResult:
    """Q >= S*(hmin(2S) - 1) for both games, and the NR partition construction."""
    res = SuiteResult("partition lemmas")
    t0 = time.perf_counter()
    for _ in range(count):
        g = random_dag(rng.randint(2, 10), rng, max_preds=2)
        S = rng.choice((2, 3))
        bound = _bound_for(S, mutate)
        for variant, definition in ((STD, HK), (NR, NR)):
            r = _exact(g, S, variant)
            if r is None:
                res.skipped += 1
                continue
            try:
                h = hmin_bruteforce(g, bound, definition)
            except ValueError:
                res.violations.append((g.to_text(), S, variant, r.q, "no valid partition"))
                continue
            if r.q < S * (h - 1):
                res.violations.append((g.to_text(), S, variant, r.q, h))
            if variant == NR:
                part = partition_from_calculation(g, S, r.witness)
                verdict = verify_partition(g, part, bound, NR)
                if not verdict:
                    res.violations.append((g.to_text(), S, "construction", verdict.violations))
        res.cases += 1
    res.seconds = time.perf_counter() - t0
    return res


def tagging_suite(rng: random.Random, count: int = 200) -> SuiteResult:
    """Q' - |dI| - |dO| <= Q <= Q' when untagged sources and sinks get tagged."""
    res = SuiteResult("tagging inequalities")
    t0 = time.perf_counter()
    for _ in range(count):
        g = random_dag(rng.randint(2, 10), rng, max_preds=2, standard=False)
        S = rng.choice((2, 3))
        dI = frozenset(g.ids[v] for v in g.sources() if v not in g.inputs)
        dO = frozenset(g.ids[v] for v in g.sinks() if v not in g.outputs)
        q, qt = _exact(g, S, NR), _exact(tag(g, TagSet(dI, dO)), S, NR)
        if q is None or qt is None:
            res.skipped += 1
            continue
        if not (qt.q - len(dI) - len(dO) <= q.q <= qt.q):
            res.violations.append((g.to_text(), S, q.q, qt.q, sorted(dI), sorted(dO)))
        res.cases += 1
    res.seconds = time.perf_counter() - t0
    return res


def decomposition_suite(rng: random.Random, count: int = 200) -> SuiteResult:
    """Sum of flexible sub-CDAG optima never exceeds the whole optimum."""
    res = SuiteResult("decomposition")
    t0 = time.perf_counter()
    for _ in range(count):
        g = random_dag(rng.randint(2, 10), rng, max_preds=2, standard=False)
        S = rng.choice((2, 3))
        ids = list(g.ids)
        rng.shuffle(ids)
        cut = rng.randint(1, len(ids) - 1)
        parts = [ids[:cut], ids[cut:]]
        for variant in (STD, NR):
            whole = _exact(g, S, variant)
            subs = [_exact(s, S, variant) for s in decompose(g, parts)]
            if whole is None or any(s is None for s in subs):
                res.skipped += 1
                continue
            if sum(s.q for s in subs) > whole.q:
                res.violations.append((g.to_text(), parts, S, variant, whole.q, [s.q for s in subs]))
        res.cases += 1
    res.seconds = time.perf_counter() - t0
    return res


def ordering_suite(rng: random.Random, count: int = 100) -> SuiteResult:
    """Forbidding recomputation or sliding can only raise the optimum."""
    res = SuiteResult("game orderings")
    t0 = time.perf_counter()
    for _ in range(count):
        g = random_dag(rng.randint(2, 10), rng, max_preds=2, standard=False)
        S = rng.choice((2, 3))
        std, nr = _exact(g, S, STD), _exact(g, S, NR)
        if std is None or nr is None:
            res.skipped += 1
            continue
        if nr.q < std.q:
            res.violations.append((g.to_text(), S, "nr < std", nr.q, std.q))
        if max((len(p) for p in g.preds), default=0) < S:
            ns = _exact(g, S, STD, allow_slide=False)
            if ns is not None and ns.q < std.q:
                res.violations.append((g.to_text(), S, "no-slide < slide", ns.q, std.q))
        res.cases += 1
    res.seconds = time.perf_counter() - t0
    return res


def oracle_suite(mutate: bool = False) -> SuiteResult:
    """Analyzer bound and partition lemma against exact optima of small programs."""
    res = SuiteResult("analyzer vs oracle")
    t0 = time.perf_counter()
    data = files("iolb") / "data"
    for name, binding, S in ORACLE_CASES:
        spec = parse_program((data / f"{name}.prog").read_text())
        c = instantiate(spec, binding)
        r = min_io(c, S, NR, vertex_cap=len(c))
        if not r.optimal:
            res.skipped += 1
            continue
        try:
            h = hmin_bruteforce(c, _bound_for(S, mutate), NR, cap=len(c))
        except ValueError:
            res.violations.append((name, binding, S, "no valid partition"))
            continue
        if r.q < S * (h - 1):
            res.violations.append((name, binding, S, "lemma", r.q, h))
        total = analyze_program(classify_edges(spec)).total
        value = ab.eval_at(total, {**binding, ab.CACHE: S})
        if value > ORACLE_SLACK * r.q:
            res.violations.append((name, binding, S, "bound", value, r.q))
        res.cases += 1
    res.seconds = time.perf_counter() - t0
    return res


def run_all(seed: int = 0, count: int = 50, mutate: bool = False) -> list:
    rng = random.Random(seed)
    return [lemma_suite(rng, count, mutate), tagging_suite(rng, count),
            decomposition_suite(rng, count), ordering_suite(rng, count), oracle_suite(mutate)]
