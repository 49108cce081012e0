import random
from fractions import Fraction
from functools import lru_cache

import pytest
from hypothesis import given, settings, strategies as st

from iolb import asymbound as ab
from iolb.asymbound import LinLog, LogTerm, Monomial, Poly
from iolb.paramlp import (ExpLP, ParametricArityError, Row, assemble_bound, base, build_lp, lp_value_at,
                          solve_plp, verify_numeric)
from iolb.polyset import Subspace, parse_set

CUBE = parse_set("[N] -> { S[i,j,k] : 0<=i<N and 0<=j<N and 0<=k<N }")
JACOBI = parse_set("[T,N] -> { S2[t,i] : 2<=t<T and 2<=i<N-2 }")
SEIDEL = parse_set("[T,N] -> { S4[t,i,j] : 0<=t<T and 1<=i<N-1 and 1<=j<N-1 }")


def e(*v):
    return Subspace.span([v])


K_MATMUL_LIKE = [e(0, 0, 1), e(0, 1, 0), Subspace.span([(1, 0, 0), (0, 1, 0)])]
K_JACOBI = [e(1, 1), e(1, -1)]
K_SCALED = [e(0, 0, 1), e(0, 1, 0), e(1, 0, 0)]

REFERENCE_LPS = [(CUBE, K_MATMUL_LIKE), (JACOBI, K_JACOBI), (CUBE, K_SCALED), (SEIDEL, K_SCALED)]


def rows(p, kind=None):
    return {r.render() for r in p.rows if kind is None or r.kind == kind}


def test_base_of_compatible_and_incompatible_sets():
    assert base(K_SCALED, 3) is not None
    assert base(K_MATMUL_LIKE, 3) is not None
    assert base([e(1, 0), e(0, 1), e(1, 1)], 2) is None


def test_matmul_like_lp_without_degenerate_rows():
    p = build_lp(CUBE, K_MATMUL_LIKE, degenerate=False)
    assert p.render().splitlines()[0] == "maximize x1 + x2 + x3"
    assert rows(p) == {"x1 + x2 <= 1", "x1 + x3 <= 1", "x3 <= 1"}
    sol = solve_plp(p)
    assert sol.render() == "x1 = 0, x2 = x3 = 1"


def test_jacobi_lp_and_solution():
    p = build_lp(JACOBI, K_JACOBI)
    assert rows(p) == {"x1 <= 1", "x2 <= 1", "x1 <= log_S(N+T)", "x2 <= log_S(N+T)"}
    sol = solve_plp(p)
    assert sol.render() == "if log_S(N+T) >= 1 then x1 = x2 = 1\nelse x1 = x2 = log_S(N+T)"
    b = assemble_bound(JACOBI, K_JACOBI, sol)
    assert ab.render(b).splitlines()[0] == "Omega(N*T/S - (N + T)) when log_S(N+T) >= 1"


def test_scaled_matmul_lp_has_nine_rows():
    p = build_lp(CUBE, K_SCALED)
    assert len(p.rows) == 9
    assert rows(p) == {"x1 + x2 <= 1", "x2 + x3 <= 1", "x1 + x3 <= 1",
                       "x1 <= log_S(N)", "x2 <= log_S(N)", "x3 <= log_S(N)",
                       "x1 + x2 <= 2*log_S(N)", "x2 + x3 <= 2*log_S(N)", "x1 + x3 <= 2*log_S(N)"}
    sol = solve_plp(p)
    assert sol.render() == ("if 2*log_S(N) >= 1 then x1 = x2 = x3 = 1/2\n"
                            "else x1 = x2 = x3 = log_S(N)")
    b = assemble_bound(CUBE, K_SCALED, sol)
    assert ab.render(b).splitlines()[0] == "Omega(N^3/sqrt(S) - N^2) when 2*log_S(N) >= 1"


@pytest.mark.parametrize("D,K", REFERENCE_LPS)
def test_piecewise_solution_matches_simplex(D, K):
    p = build_lp(D, K)
    sol = solve_plp(p)
    rng = random.Random(len(p.rows))
    for _ in range(100):
        values = {t: Fraction(rng.randint(0, 300), 100) for t in p.logterms}
        assert verify_numeric(p, sol, values, tol=1e-9), values


@lru_cache(maxsize=None)
def seidel_lp():
    p = build_lp(SEIDEL, K_SCALED)
    return p, solve_plp(p)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.fractions(0, 3), min_size=2, max_size=2))
def test_solution_cases_cover_the_orthant(vals):
    p, sol = seidel_lp()
    values = dict(zip(p.logterms, vals))
    case = sol.case_for({t: float(v) for t, v in values.items()})
    theta = float(case.theta.const) + sum(float(c) * float(values[t]) for t, c in case.theta.coeffs)
    assert theta == pytest.approx(float(lp_value_at(p, values)), abs=1e-9)


def test_negative_log_values_are_rejected():
    p = build_lp(JACOBI, K_JACOBI)
    with pytest.raises(ValueError):
        verify_numeric(p, solve_plp(p), {p.logterms[0]: Fraction(-1)})


def test_too_many_log_symbols_is_reported():
    terms = [LogTerm(Poly.of([Monomial.of({n: 1})])) for n in "ABCDE"]
    p = ExpLP(((1,),), tuple(Row((0,), LinLog.of({t: 1}), "degenerate") for t in terms))
    with pytest.raises(ParametricArityError):
        solve_plp(p)
