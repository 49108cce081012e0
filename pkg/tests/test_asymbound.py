from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from iolb import asymbound as ab
from iolb.asymbound import CACHE, Cond, LinLog, LogTerm, Monomial, Poly

N3_OVER_S = Monomial.of(N=3, S=-1)
N2 = Monomial.of(N=2)
LOG_N = LogTerm(Poly.of([Monomial.of(N=1)]))

monos = st.builds(lambda n, t, s: Monomial.of(N=n, T=t, S=Fraction(s, 2)),
                  st.integers(0, 3), st.integers(0, 3), st.integers(-2, 2))


def test_render_plain_and_scaled():
    b = ab.bound([N3_OVER_S], [[N2]])
    assert ab.render(b) == "Omega(N^3/S - N^2)"
    w = ab.scale_by(b, Monomial.of(W=1))
    assert ab.render(w) == "Omega(W*(N^3/S - N^2))"
    assert ab.render(ab.ZERO) == "0"


def test_monomial_rendering():
    assert str(Monomial.of(N=3, S=Fraction(-1, 2))) == "N^3/sqrt(S)"
    nt = Poly.of([Monomial.of(N=1), Monomial.of(T=1)])
    assert str(Monomial.of({"N": 1, "T": 1, CACHE: 1, nt: -2})) == "N*T*S/(N + T)^2"


def test_simplify_drops_dominated_terms():
    b = ab.bound([Monomial.of(N=3), Monomial.of(N=2)], [[Monomial.of(N=1)], [N2]])
    assert ab.render(b) == "Omega(N^3 - N^2)"


def test_region_rendering_and_case_selection():
    big = Cond(LinLog.of({LOG_N: 1}, -1))
    b = ab.AsymBound((ab.Case((big,), frozenset([N3_OVER_S])),
                      ab.Case((big.negate(),), frozenset([N2]))))
    assert ab.render(b) == "Omega(N^3/S) when log_S(N) >= 1\nOmega(N^2) when log_S(N) < 1"
    assert ab.eval_at(b, {"N": 100, CACHE: 10}) == pytest.approx(1e5)
    assert ab.eval_at(b, {"N": 5, CACHE: 10}) == pytest.approx(25)


def test_reduce_region_drops_implied_conditions():
    c1 = Cond(LinLog.of({LOG_N: 2}, -1))
    c2 = Cond(LinLog.of({LOG_N: 1}, -1))
    assert ab.reduce_region((c1, c2)) == (c2,)
    assert not ab.region_feasible((c2, c2.negate(), Cond(LinLog.of({LOG_N: -1}, Fraction(1, 2)))))


def test_scale_rejects_negative_exponents():
    with pytest.raises(ValueError):
        ab.scale_by(ab.bound([N2]), Monomial.of(S=-1))


@given(st.lists(monos, min_size=1, max_size=4), st.lists(monos, min_size=1, max_size=4),
       st.integers(2, 50), st.integers(2, 50), st.integers(2, 9))
def test_add_lies_between_max_and_sum(p1, p2, n, t, s):
    a, b = ab.bound(p1), ab.bound(p2)
    binding = {"N": n, "T": t, CACHE: s}
    total = ab.add(a, b)
    # dropping dominated monomials only loses lower-order mass
    assert ab.eval_at(total, binding) <= ab.eval_at(a, binding) + ab.eval_at(b, binding) + 1e-9
    assert ab.eval_at(total, binding) >= max(ab.eval_at(a, binding), ab.eval_at(b, binding)) - 1e-9


@given(st.lists(monos, min_size=1, max_size=4))
def test_simplify_is_idempotent(ms):
    b = ab.bound(ms, [ms[:1]])
    assert ab.simplify(ab.simplify(b)) == ab.simplify(b)


def test_json_mirror():
    j = ab.as_json(ab.scale_by(ab.bound([N3_OVER_S], [[N2]]), Monomial.of(W=1)))
    assert j["scale"] == {"W": "1"}
    assert j["cases"][0]["text"] == "Omega(W*(N^3/S - N^2))"
