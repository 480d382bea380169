import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from kvcert.errors import DegreeMismatch, InvalidParams
from kvcert.ffield import rank
from kvcert.ring import (
    BiMonomial,
    BiPoly,
    RingParams,
    basis_R,
    basis_S,
    dim_S,
    mult_matrix,
    normal_form,
)

N = 3
XS = sympy.symbols("x0:4")
YS = sympy.symbols("y0:4")
GENS = XS + YS  # lex x0 > ... > x3 > y0 > ... > y3


def to_sympy(f: BiPoly):
    out = 0
    for m, c in f.terms.items():
        term = c
        for v, e in zip(GENS, m.alpha + m.beta):
            term *= v ** e
        out += term
    return sympy.Poly(out, *GENS, modulus=f.p)


def sympy_normal_form(f: BiPoly):
    q = sum(x * y for x, y in zip(XS, YS))
    _, r = sympy.reduced(to_sympy(f).as_expr(), [q], *GENS, order="lex", modulus=f.p)
    return sympy.Poly(r, *GENS, modulus=f.p)


def test_dimensions():
    assert dim_S(N, 1, 1) == 16
    assert dim_S(N, -1, 5) == 0
    assert dim_S(N, 1, 9) == 880
    assert len(basis_S(N, 1, 9)) == 880


def test_reduced_bases():
    assert len(basis_R(N, 1, 1)) == 15
    assert len(basis_R(N, 1, 9)) == 715
    b02 = basis_R(N, 0, 2)
    assert len(b02) == 10 and all(sum(m.alpha) == 0 for m in b02)
    assert all(not (m.alpha[0] and m.beta[0]) for m in basis_R(N, 3, 2))


def test_basis_is_descending_lex():
    b = basis_R(N, 2, 2)
    assert list(b) == sorted(b, reverse=True)


def test_relation_rewrites():
    x0y0 = BiPoly.x(2, N, 0) * BiPoly.y(2, N, 0)
    want = BiPoly.x(2, N, 1) * BiPoly.y(2, N, 1) + BiPoly.x(2, N, 2) * BiPoly.y(2, N, 2) \
        + BiPoly.x(2, N, 3) * BiPoly.y(2, N, 3)
    assert normal_form(x0y0) == want
    for p in (2, 3, 5):
        q = BiPoly.q(p, N)
        assert normal_form(q).is_zero()
        assert normal_form(q ** p).is_zero()


monomials = st.tuples(
    st.lists(st.integers(0, 3), min_size=4, max_size=4),
    st.lists(st.integers(0, 3), min_size=4, max_size=4),
)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([2, 3, 5]), monomials, st.integers(1, 4))
def test_normal_form_matches_groebner_reduction(p, m, c):
    f = BiPoly(p, N, {BiMonomial(tuple(m[0]), tuple(m[1])): c % (p - 1) + 1})
    got = normal_form(f)
    assert all(t.is_reduced() for t in got.terms)
    assert to_sympy(got) == sympy_normal_form(f)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([2, 3]), monomials, monomials)
def test_normal_form_is_multiplicative(p, m1, m2):
    f = BiPoly(p, N, {BiMonomial(tuple(m1[0]), tuple(m1[1])): 1})
    g = BiPoly(p, N, {BiMonomial(tuple(m2[0]), tuple(m2[1])): 1})
    assert normal_form(normal_form(f) * normal_form(g)) == normal_form(f * g)


def test_mult_matrix_examples():
    one = BiPoly.one(2, N)
    M = mult_matrix(one, (1, 2))
    assert (M.data == np.eye(M.rows, dtype=int)).all()

    y02 = BiPoly.y(2, N, 0, 2)
    col = mult_matrix(y02, (0, 0))
    assert col.shape == (10, 1)
    idx = basis_R(N, 0, 2).index(BiMonomial((0,) * 4, (2, 0, 0, 0)))
    assert col.data[:, 0].tolist() == [int(k == idx) for k in range(10)]

    inj = mult_matrix(y02, (0, 2))
    assert inj.shape == (35, 10) and rank(inj) == 10


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2), st.integers(0, 2), st.integers(0, 3))
def test_mult_matrix_is_functorial(a, b, i):
    # multiplying by x_i then y_i equals multiplying by x_i y_i
    x = BiPoly.x(3, N, i)
    y = BiPoly.y(3, N, i)
    lhs = mult_matrix(y, (a + 1, b)) @ mult_matrix(x, (a, b))
    assert lhs == mult_matrix(x * y, (a, b))


def test_mult_by_q_is_zero():
    assert mult_matrix(BiPoly.q(2, N), (2, 1)).is_zero()


def test_errors():
    with pytest.raises(DegreeMismatch):
        BiPoly.x(2, N, 0) + BiPoly.y(2, N, 0)
    with pytest.raises(DegreeMismatch):
        BiPoly(2, N, {BiMonomial((1, 0, 0, 0), (0,) * 4): 1, BiMonomial((0,) * 4, (1, 0, 0, 0)): 1})
    with pytest.raises(InvalidParams):
        RingParams(4, 3)
    with pytest.raises(InvalidParams):
        RingParams(2, 4)
    RingParams(2, 3)
