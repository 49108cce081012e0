import pytest

from iolb import asymbound as ab
from iolb.dfgraph import EdgeClass, classify_edges, parse_program
from iolb.pathfind import (BROADCAST, CIRCUIT, analyze_program, broadcast_kernel,
                           enumerate_broadcast_paths, enumerate_circuits)
from iolb.polyset import Subspace, as_translation

from conftest import load_graph


def first_case(b):
    return ab.render(b).splitlines()[0]


def test_jacobi_circuits_in_order():
    g = load_graph("jacobi1d")
    paths = list(enumerate_circuits(g, "S2"))
    assert [str(p) for p in paths] == ["(e7,e8)", "(e7,e9)", "(e7,e10)"]
    assert [tuple(as_translation(p.relation)) for p in paths] == [(1, 1), (1, 0), (1, -1)]
    assert all(p.kind == CIRCUIT for p in paths)


def test_circuit_length_cap():
    g = load_graph("jacobi1d")
    assert list(enumerate_circuits(g, "S2", max_len=1)) == []


def test_scaled_matmul_kernels():
    g = load_graph("scaled_matmul")
    [circuit] = enumerate_circuits(g, "S1")
    assert tuple(as_translation(circuit.relation)) == (0, 0, 1)
    ks = [broadcast_kernel(p) for p in enumerate_broadcast_paths(g, "S1", EdgeClass.BROADCAST1)]
    assert ks == [Subspace.span([(0, 1, 0)]), Subspace.span([(1, 0, 0)])]


@pytest.mark.parametrize("name,want", [
    ("matmul_like", "Omega(N^3/S) when log_S(N) >= 1"),
    ("jacobi1d", "Omega(N*T/S - (N + T)) when log_S(N+T) >= 1"),
    ("nbody", "Omega(N^2/S) when log_S(N) >= 1"),
    ("scaled_matmul", "Omega(N^3/sqrt(S) - N^2) when 2*log_S(N) >= 1"),
    ("seidel", "Omega(N^2*T/sqrt(S) - (N^2 + N*T)) when 2*log_S(T) >= 1 and 2*log_S(N) >= 1"),
    ("composite", "Omega(W*(N^3/sqrt(S) + N^2*T/sqrt(S) - N^2 - N*T)) "
                  "when 2*log_S(N) >= 1 and 2*log_S(T) >= 1"),
])
def test_program_totals(name, want):
    assert first_case(analyze_program(load_graph(name)).total) == want


def test_matmul_like_frontiers_are_fed_by_inputs():
    r = analyze_program(load_graph("matmul_like"))
    va = r.groups[0].analysis.vertices["S"]
    assert va.tagged == (False, False, False)
    assert [p.kind for p in va.chosen.paths] == [CIRCUIT, BROADCAST, BROADCAST]


def test_tagged_inputs_force_tagging():
    r = analyze_program(load_graph("scaled_matmul"))
    assert r.groups[0].analysis.vertices["S1"].tagged == (True, True, True)


def test_small_case_of_jacobi():
    b = analyze_program(load_graph("jacobi1d")).total
    assert ab.render(b).splitlines()[1] == "Omega(N*T*S/(N + T)^2 - (N + T)) when log_S(N+T) < 1"


def test_trace_is_deterministic():
    t1, t2 = [], []
    analyze_program(load_graph("jacobi1d"), trace=t1)
    analyze_program(load_graph("jacobi1d"), trace=t2)
    assert t1 == t2
    assert "S2: circuit (e7,e8) direction (1, 1)" in t1


def test_program_without_edges_gives_zero():
    spec = parse_program("params N;\nstmt S { [N] -> { S[i] : 0<=i<N } };\n")
    r = analyze_program(classify_edges(spec))
    assert r.total.is_zero


def test_io_count():
    assert ab.render(analyze_program(load_graph("nbody")).io_count) == "Omega(N)"
