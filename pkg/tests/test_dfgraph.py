import pytest

from iolb.dfgraph import (EdgeClass, VertexCapExceeded, classify_edges, instantiate,
                          parse_program)
from iolb.polyset import ParseError

from conftest import load_graph, load_program

HEADER = "params N;\ninput A { [N] -> { A[i] : 0<=i<N } };\nstmt S { [N] -> { S[i,j] : 0<=i<N and 0<=j<N } };\n"


def classes(name):
    return {e.name: e.cls for e in load_graph(name).edges}


def test_jacobi_edges():
    c = classes("jacobi1d")
    assert len(c) == 10
    assert all(c[f"e{k}"] == EdgeClass.SKIPPED for k in range(2, 7))
    assert all(c[f"e{k}"] == EdgeClass.INJECTIVE for k in (1, 7, 8, 9, 10))


def test_scaled_matmul_edges():
    g = load_graph("scaled_matmul")
    assert len(g.vertices) == 6 and len(g.edges) == 7
    fam = {e.cls for e in g.edges}
    assert EdgeClass.BROADCAST1 in fam and EdgeClass.INJECTIVE in fam


def test_broadcast_classes():
    spec = parse_program(HEADER + "edge b : [N] -> { A[i] -> S[i,j] : 0<=i<N and 0<=j<N };\n"
                         "stmt U { [N] -> { U[i,j,k] : 0<=i<N and 0<=j<N and 0<=k<N } };\n"
                         "edge c : [N] -> { A[i] -> U[i,j,k] : 0<=i<N and 0<=j<N and 0<=k<N };\n")
    c = {e.name: e for e in classify_edges(spec).edges}
    assert c["b"].cls == EdgeClass.BROADCAST1
    assert c["c"].cls == EdgeClass.BROADCASTK
    assert not c["b"].injective


def test_disjunctive_edges_are_split():
    spec = parse_program(HEADER + "edge d : [N] -> { S[i,j] -> S[i,j+1] : 0<=i<N and 0<=j<N-1; "
                                  "S[i,j] -> S[i+1,j] : 0<=i<N-1 and 0<=j<N };\n")
    assert [e.name for e in spec.edges] == ["d.1", "d.2"]


def test_roles_and_groups():
    spec = load_program("composite")
    assert [g.name for g in spec.groups] == ["matmul", "seidel"]
    assert spec.repeats[0].factor == "W"
    assert spec.statement("S3").is_output and spec.statement("S4").is_output
    assert all(s.is_input for s in spec.statements if s.tagged)


def test_instantiate_jacobi():
    c = instantiate(load_program("jacobi1d"), {"T": 3, "N": 5})
    assert (len(c), len(c.edges)) == (22, 29)
    assert "S2[1,3]" in c.index
    assert all(c.ids[v].startswith("I[") for v in c.inputs)


def test_instantiate_caps_and_bindings():
    spec = load_program("jacobi1d")
    with pytest.raises(ValueError):
        instantiate(spec, {"N": 5})
    with pytest.raises(VertexCapExceeded):
        instantiate(spec, {"T": 100, "N": 100}, cap=1000)


def test_edges_outside_domains_are_rejected():
    spec = parse_program(HEADER + "edge x : [N] -> { A[i] -> S[i,N] : 0<=i<N };\n")
    with pytest.raises(ValueError):
        instantiate(spec, {"N": 3})


@pytest.mark.parametrize("text,where", [
    (HEADER + "edge e : [N] -> { A[i] -> Q[i] : 0<=i<N };", "unknown statement"),
    (HEADER + "stmt S { [N] -> { S[i] : 0<=i<N } };", "declared twice"),
    (HEADER + "group g { S };\nrepeat M { g };", "not a parameter"),
    (HEADER + "edge e : [N] -> { A[i] -> S[i] : 0<=i<N };", "dimensions"),
    (HEADER + "frobnicate;", "unknown declaration"),
])
def test_parse_errors(text, where):
    with pytest.raises(ParseError) as e:
        parse_program(text)
    assert where in str(e.value)
    assert e.value.line is not None
