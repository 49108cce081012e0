import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from iolb.polyset import (ParseError, Subspace, apply, as_affine_map, as_translation, card_at,
                          card_leading, compose, dim_of, domain, frontier, image, intersect,
                          inverse, kernel_basis, parse_relation, parse_set, points_at, subtract,
                          union)

JACOBI_D = "[T,N] -> { S2[t,i] : 1<=t<T and 1<=i<N-1 }"
RC = {
    1: "[T,N] -> { S2[t,i] -> S2[t+1,i+1] : 1<=t<T-1 and 1<=i<N-2 }",
    2: "[T,N] -> { S2[t,i] -> S2[t+1,i] : 1<=t<T-1 and 1<=i<N-1 }",
    3: "[T,N] -> { S2[t,i] -> S2[t+1,i-1] : 1<=t<T-1 and 2<=i<N-1 }",
}
FRONTIERS = {
    1: "[T,N] -> { S2[1,i] : 2<=i<N-2; S2[t,1] : 1<=t<T-1 }",
    2: "[T,N] -> { S2[1,i] : 1<=i<N-1 }",
    3: "[T,N] -> { S2[1,i] : 2<=i<N-1; S2[t,N-2] : 2<=t<T-1 }",
}


def _random_constraint(rng, names, params):
    coeffs = [rng.randint(-3, 3) for _ in names]
    if not any(coeffs):
        coeffs[0] = 1
    lhs = " + ".join(f"{c}*{n}" for c, n in zip(coeffs, names))
    rhs = rng.randint(-4, 4)
    if params and rng.random() < 0.5:
        return f"{lhs} <= {rng.choice(params)} + {rhs}"
    return f"{lhs} >= {rhs}"


def random_set(rng):
    """A parametric union of boxes cut by random half-spaces, with its box."""
    dim = rng.randint(1, 3)
    names = "ijk"[:dim]
    pieces = []
    for _ in range(rng.randint(1, 2)):
        cons = [f"0 <= {n} < N" for n in names]
        cons += [_random_constraint(rng, names, ["N"]) for _ in range(rng.randint(0, 3))]
        if rng.random() < 0.2:
            a, b = rng.sample(range(dim), 2) if dim > 1 else (0, 0)
            cons.append(f"{names[a]} = {names[b]}")
        pieces.append(f"S[{','.join(names)}] : " + " and ".join(cons))
    return "[N] -> { " + "; ".join(pieces) + " }", dim


def naive_count(text, dim, N):
    """Enumerate the bounding box and test each piece's constraints directly."""
    body = text.split("{", 1)[1].rsplit("}", 1)[0]
    tests = []
    for piece in body.split(";"):
        cond = piece.split(":", 1)[1]
        expr = cond.replace(" and ", ") and (").replace("=", "==").replace("<==", "<=") \
                   .replace(">==", ">=").replace("!==", "!=")
        tests.append(compile("(" + expr + ")", "<set>", "eval"))
    names = "ijk"[:dim]
    n = 0
    for pt in itertools.product(range(N), repeat=dim):
        env = dict(zip(names, pt), N=N)
        if any(eval(t, {}, env) for t in tests):
            n += 1
    return n


def test_card_at_matches_enumeration_on_random_sets():
    rng = random.Random(8)
    for _ in range(100):
        text, dim = random_set(rng)
        s = parse_set(text)
        N = rng.randint(1, 12)
        assert card_at(s, {"N": N}) == naive_count(text, dim, N), text


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 9))
def test_set_algebra_agrees_with_point_sets(seed, N):
    rng = random.Random(seed)
    a, dim_a = random_set(rng)
    b, dim_b = random_set(rng)
    if dim_a != dim_b:
        return
    A, B = parse_set(a), parse_set(b)
    pa, pb = points_at(A, {"N": N}), points_at(B, {"N": N})
    assert points_at(union(A, B), {"N": N}) == pa | pb
    assert points_at(intersect(A, B), {"N": N}) == pa & pb
    assert points_at(subtract(A, B), {"N": N}) == pa - pb


@pytest.mark.parametrize("k", [1, 2, 3])
def test_jacobi_frontiers_equal_printed_sets(k):
    r = parse_relation(RC[k])
    f = frontier(domain(r), r)
    want = parse_set(FRONTIERS[k])
    rng = random.Random(k)
    for _ in range(5):
        b = {"T": rng.randint(4, 30), "N": rng.randint(5, 30)}
        assert card_at(f, b) == card_at(want, b)
        assert points_at(f, b) == points_at(want, b)


def test_frontier_of_empty_relation_is_the_set():
    d = parse_set(JACOBI_D)
    r = parse_relation("[T,N] -> { S2[t,i] -> S2[t+1,i] : 1 = 0 }")
    f = frontier(d, r)
    assert card_at(f, {"T": 6, "N": 7}) == card_at(d, {"T": 6, "N": 7})


def test_translations_and_kernels():
    assert tuple(as_translation(parse_relation(RC[1]))) == (1, 1)
    assert tuple(as_translation(parse_relation(RC[3]))) == (1, -1)
    bcast = parse_relation("[N] -> { A[i,k] -> S[i,j,k] : 0<=i<N and 0<=j<N and 0<=k<N }")
    m = as_affine_map(inverse(bcast))
    assert m is not None
    assert kernel_basis(m, 3) == Subspace.span([(0, 1, 0)])


def test_compose_and_apply():
    e7 = parse_relation("[T,N] -> { S2[t,i] -> S3[t,i] : 1<=t<T and 1<=i<N-1 }")
    e8 = parse_relation("[T,N] -> { S3[t,i] -> S2[t+1,i+1] : 1<=t<T-1 and 1<=i<N-2 }")
    c = compose(e8, e7)
    b = {"T": 7, "N": 9}
    want = parse_relation(RC[1])
    assert card_at(domain(c), b) == card_at(domain(want), b)
    assert points_at(image(c), b) == points_at(image(want), b)
    d = parse_set(JACOBI_D)
    assert points_at(apply(c, d), b) == points_at(image(want), b)


def test_dimension_and_leading_terms():
    cube = parse_set("[N] -> { S[i,j,k] : 0<=i<N and 0<=j<N and 0<=k<N }")
    assert dim_of(cube) == 3
    assert str(card_leading(cube)) == "N^3"
    rect = parse_set("[N,T] -> { S[t,i] : 0<=t<T and 0<=i<N }")
    assert str(card_leading(rect)) == "N*T"
    diag = parse_set("[N] -> { S[i,j] : 0<=i<N and j = i }")
    assert dim_of(diag) == 1


def test_subspace_operations():
    a = Subspace.span([(1, 0, 0)])
    b = Subspace.span([(0, 1, 0)])
    assert (a + b).dim == 2
    assert a.intersect(b).dim == 0
    assert a.complement() == Subspace.span([(0, 1, 0), (0, 0, 1)])


@pytest.mark.parametrize("text", [
    "[N] -> { S[i] : 0<=i<N",
    "[N] -> { S[i] : 0<=q<N }",
    "[N] -> { S[i] : 0<=i<<N }",
])
def test_parse_errors_carry_a_position(text):
    with pytest.raises(ParseError) as e:
        parse_set(text)
    assert e.value.line == 1 and e.value.col is not None
