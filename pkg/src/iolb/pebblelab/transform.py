"""Decomposition into sub-CDAGs and input/output tagging."""
from __future__ import annotations

from dataclasses import dataclass

from .cdag import CDAG, CDAGError

FLEXIBLE, STANDARD = "flexible", "standard"


@dataclass(frozen=True)
class TagSet:
    dI: frozenset = frozenset()
    dO: frozenset = frozenset()


def decompose(c: CDAG, parts, mode: str = FLEXIBLE) -> list:
    """Induced sub-CDAGs with I_i = I & V_i and O_i = O & V_i.

    In standard mode every source of a sub-CDAG also becomes an input and
    every sink an output, as the classical game requires.
    """
    seen = set()
    for p in parts:
        for v in p:
            if v not in c.index:
                raise CDAGError(f"unknown vertex {v}")
            if v in seen:
                raise CDAGError(f"vertex {v} is in two parts")
            seen.add(v)
    if len(seen) != len(c):
        missing = next(v for v in c.ids if v not in seen)
        raise CDAGError(f"vertex {missing} is in no part")
    subs = []
    for p in parts:
        sub = c.induced(c.index[v] for v in p)
        if mode == STANDARD:
            sub = sub.standardized()
        elif mode != FLEXIBLE:
            raise ValueError(f"unknown mode {mode!r}")
        subs.append(sub)
    return subs


def tag(c: CDAG, t: TagSet) -> CDAG:
    """The same DAG with I extended by dI and O extended by dO."""
    dI = {c.index[v] for v in t.dI}
    dO = {c.index[v] for v in t.dO}
    bad = [c.ids[v] for v in dI if c.preds[v]]
    if bad:
        raise CDAGError(f"tagged input {bad[0]} has predecessors")
    return c.with_labels(c.inputs | dI, c.outputs | dO)
