import random

import pytest
from hypothesis import given, settings, strategies as st

from iolb.pebblelab import (FLEXIBLE, HK, NR, STANDARD, STD, CalculationError, CapExceeded,
                            CDAG, CDAGError, Partition, TagSet, decompose, greedy_calculation,
                            hmin_bruteforce, min_dominator, min_dominator_bruteforce, min_io,
                            parse_cdag, parse_moves, partition_from_calculation, random_dag, tag,
                            validate_calculation, verify_partition)

from conftest import load_cdag

CALC_6 = ("{R1_2, R1_3, R3_6, R4_2, R1_1, R3_9, R4_1, R4_6, R1_4, R3_7, R4_3, R3_{10}, "
          "R4_9, R4_7, R1_5, R3_8, R4_4, R4_5, R3_{11}, R2_{11}}")
CALC_12 = ("{R1_2, R1_3, R3_6, R4_2, R1_4, R2_6, R3_7, R4_3, R1_5, R2_7, R3_8, R2_8, R1_1, "
           "R1_6, R3_9, R4_1, R4_6, R1_7, R3_{10}, R4_7, R4_9, R1_8, R3_{11}, R2_{11}}")
CHAIN_PARTS = [
    [f"{x}{i}" for i in range(4) for x in ("a", "b")] + [f"S{s}_{i}" for i in range(4) for s in (1, 2)],
    [f"S{s}_{i}" for i in range(4) for s in (3, 4)],
]

seeds = st.integers(0, 10**6)


def small_dag(seed, standard=True):
    rng = random.Random(seed)
    return random_dag(rng.randint(2, 8), rng, max_preds=2, standard=standard), rng.choice((2, 3))


def test_reduction_tree_listed_calculations():
    c = load_cdag("reduction_tree")
    assert validate_calculation(c, 3, parse_moves(CALC_6)) == 6
    assert validate_calculation(c, 3, parse_moves(CALC_12), implicit_evict=True) == 12
    with pytest.raises(CalculationError):
        validate_calculation(c, 3, parse_moves(CALC_12))


def test_reduction_tree_optimum():
    r = min_io(load_cdag("reduction_tree"), 3)
    assert r.optimal and r.q == 6
    assert validate_calculation(load_cdag("reduction_tree"), 3, r.witness) == 6


def test_single_vertex():
    c = parse_cdag("v a input\nv b output\ne a b\n")
    assert min_io(c, 2).q == 2


def test_four_chains_standard_parts():
    c = load_cdag("four_chains")
    subs = decompose(c, CHAIN_PARTS, STANDARD)
    assert sum(min_io(s, 2, vertex_cap=16).q for s in subs) == 20


def test_caps():
    c = load_cdag("four_chains")
    with pytest.raises(CapExceeded):
        min_io(c, 2)
    with pytest.raises(CapExceeded):
        min_io(load_cdag("reduction_tree"), 9)


def test_bad_cdag_text():
    with pytest.raises(CDAGError):
        parse_cdag("v a\nv a\n")
    with pytest.raises(CDAGError):
        parse_cdag("v a\ne a b\n")
    with pytest.raises(CDAGError):
        parse_cdag("v a\nv b\ne a b\ne b a\n")


def test_decompose_rejects_overlap_and_gaps():
    c = load_cdag("reduction_tree")
    with pytest.raises(CDAGError):
        decompose(c, [["1", "2"], ["2"]])
    with pytest.raises(CDAGError):
        decompose(c, [["1"]])


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_witness_replays_at_its_cost(seed):
    c, S = small_dag(seed)
    for variant in (STD, NR):
        r = min_io(c, S, variant)
        assert validate_calculation(c, S, r.witness, variant) == r.q
        q, greedy = greedy_calculation(c, S, variant)
        assert validate_calculation(c, S, greedy, variant) == q >= r.q


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_partition_lemmas(seed):
    c, S = small_dag(seed)
    for variant, definition in ((STD, HK), (NR, NR)):
        q = min_io(c, S, variant).q
        assert q >= S * (hmin_bruteforce(c, 2 * S, definition) - 1)
    r = min_io(c, S, NR)
    assert verify_partition(c, partition_from_calculation(c, S, r.witness), 2 * S, NR)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_tagging_inequalities(seed):
    c, S = small_dag(seed, standard=False)
    dI = frozenset(c.ids[v] for v in c.sources() if v not in c.inputs)
    dO = frozenset(c.ids[v] for v in c.sinks() if v not in c.outputs)
    q = min_io(c, S, NR).q
    qt = min_io(tag(c, TagSet(dI, dO)), S, NR).q
    assert qt - len(dI) - len(dO) <= q <= qt


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_flexible_decomposition_never_exceeds_whole(seed):
    c, S = small_dag(seed, standard=False)
    rng = random.Random(seed)
    ids = list(c.ids)
    rng.shuffle(ids)
    cut = rng.randint(1, len(ids) - 1)
    subs = decompose(c, [ids[:cut], ids[cut:]], FLEXIBLE)
    assert sum(min_io(s, S, NR).q for s in subs) <= min_io(c, S, NR).q


@settings(max_examples=60, deadline=None)
@given(seeds, st.integers(1, 255))
def test_flow_dominator_matches_bruteforce(seed, block):
    c, _ = small_dag(seed)
    block &= (1 << len(c)) - 1
    if block:
        assert min_dominator(c, block) == min_dominator_bruteforce(c, block)


def test_verify_partition_reports_cycles():
    c = parse_cdag("v a input\nv b\nv c\nv d output\ne a b\ne b c\ne c d\n")
    bad = Partition.of([["a", "c"], ["b", "d"]])
    verdict = verify_partition(c, bad, 4, NR)
    assert not verdict and verdict.violations


def test_cdag_build_and_text_round_trip():
    c = load_cdag("reduction_tree")
    assert parse_cdag(c.to_text()).to_text() == c.to_text()
    assert isinstance(c, CDAG) and len(c) == 11
