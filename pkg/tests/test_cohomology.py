from itertools import product
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kvcert.cohomology import chi_W, h_pn, h_W, h_Y, induced_map_Y, model_Y, times_q_map
from kvcert.errors import UnsupportedDimension
from kvcert.ffield import rank
from kvcert.ring import BiPoly


def bott(n, a, i):
    if i == 0 and a >= 0:
        return comb(a + n, n)
    if i == n and a <= -n - 1:
        return comb(-a - 1, n)
    return 0


def kunneth(n, a, b, k):
    return sum(bott(n, a, i) * bott(n, b, k - i) for i in range(k + 1))


def test_projective_space_examples():
    assert h_pn(3, 2, 0) == 10
    assert h_pn(3, -4, 3) == 1
    assert all(h_pn(3, -2, i) == 0 for i in range(4))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_projective_space_matches_bott(n):
    for a in range(-9, 8):
        for i in range(n + 1):
            assert h_pn(n, a, i) == bott(n, a, i)


def test_product_examples():
    assert h_W(3, (-4, 0), 3) == 1
    assert h_W(3, (-5, 0), 3) == 4
    assert h_W(3, (-4, -4), 6) == 1


def test_product_matches_kunneth():
    for n in (2, 3):
        for a, b in product(range(-7, 4), repeat=2):
            for k in range(2 * n + 1):
                assert h_W(n, (a, b), k) == kunneth(n, a, b, k)


def test_hypersurface_examples():
    assert h_Y(3, (1, 1), 0) == 15
    assert h_Y(3, (0, -4), 3) == 1
    assert h_Y(3, (0, -4), 2) == 0
    assert h_Y(3, (-4, 0), 3) == 1


@pytest.mark.parametrize("p", [2, 3])
def test_les_of_multiplication_by_q(p):
    # for each W-degree, h(W, a-1,b-1) - rank q = dim ker q and h(W, a,b) - rank q = dim coker q
    n = 3
    for a, b in product(range(-6, 3), repeat=2):
        chi = sum((-1) ** i * h_Y(n, (a, b), i, p) for i in range(2 * n))
        assert chi == chi_W(n, a, b) - chi_W(n, a - 1, b - 1)
        for k in (n, 2 * n):
            r = rank(times_q_map(n, (a, b), k, p))
            assert r <= min(h_W(n, (a - 1, b - 1), k), h_W(n, (a, b), k))


@pytest.mark.parametrize("n,p", [(2, 2), (3, 2), (3, 3), (4, 3)])
def test_serre_duality(n, p):
    top = 2 * n - 1
    for a, b in product(range(-n - 3, 3), repeat=2):
        for i in range(top + 1):
            assert h_Y(n, (a, b), i, p) == h_Y(n, (-n - a, -n - b), top - i, p)


@pytest.mark.parametrize("n", [3, 4])
def test_middle_degrees_vanish(n):
    for a, b in product(range(-7, 5), repeat=2):
        for i in range(1, n - 1):
            assert h_Y(n, (a, b), i) == 0


def test_models_match_dimensions():
    for a, b in product(range(-6, 3), repeat=2):
        for i in range(6):
            assert model_Y(3, (a, b), i).dim == h_Y(3, (a, b), i)


def test_induced_identity_and_inclusion():
    one = BiPoly.one(2, 3)
    for twist, i in (((1, 1), 0), ((-5, 1), 3), ((1, -6), 2), ((-5, -5), 5)):
        M = induced_map_Y(one, i, twist, twist)
        assert (M.data == np.eye(M.rows, dtype=int)).all()
    M = induced_map_Y(BiPoly.y(2, 3, 0, 2), 0, (0, 0), (0, 2))
    assert M.shape == (10, 1) and M.data.sum() == 1


@settings(max_examples=25, deadline=None)
@given(st.integers(-7, 1), st.integers(-7, 1), st.sampled_from([2, 3, 5]), st.integers(0, 3),
       st.integers(0, 3))
def test_induced_maps_compose(a, b, p, j, k):
    # H^i(y_k) after H^i(x_j) equals H^i(x_j y_k), on each nonzero degree
    n = 3
    x = BiPoly.x(p, n, j)
    y = BiPoly.y(p, n, k)
    for deg in (0, 2, 3, 5):
        g = induced_map_Y(x, deg, (a, b), (a + 1, b))
        h = induced_map_Y(y, deg, (a + 1, b), (a + 1, b + 1))
        assert h @ g == induced_map_Y(x * y, deg, (a, b), (a + 1, b + 1))


def test_unsupported_dimension():
    with pytest.raises(UnsupportedDimension):
        h_Y(1, (0, 0), 0)
    with pytest.raises(UnsupportedDimension):
        model_Y(1, (0, 0), 0)
