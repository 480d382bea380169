import pytest
from hypothesis import given, strategies as st

from kvcert.errors import InvalidParams
from kvcert.ffield import is_prime
from kvcert.picard import (
    PicClass,
    dim_X,
    dim_Y,
    fano_witness,
    omega_X,
    omega_X_closed_form,
    omega_Y,
    very_ample_pattern,
)


def test_canonical_class_of_Y():
    assert omega_Y(3).result == PicClass(-3, -3, 0)
    assert omega_Y(4).result == PicClass(-4, -4, 0)
    with pytest.raises(InvalidParams):
        omega_Y(1)


def test_canonical_class_of_X():
    assert omega_X(2, 3).result.as_tuple() == (-1, -1, -2)
    assert omega_X(3, 3).result.as_tuple() == (0, 0, -2)
    assert omega_X(3, 4).result.as_tuple() == (-1, 2, -3)
    assert str(omega_X(2, 3).result) == "(-1,-1;-2)"


@pytest.mark.parametrize("p", [q for q in range(2, 30) if is_prime(q)])
def test_rule_chain_matches_closed_form(p):
    for n in range(3, p + 2):
        d = omega_X(p, n)
        assert d.result == omega_X_closed_form(p, n)
        assert len(d.trace) >= 5
        assert (d.dim_X, d.dim_Y) == (dim_X(n), dim_Y(n))


def test_invalid_parameters():
    for p, n in ((2, 4), (4, 3), (3, 2), (1, 3)):
        with pytest.raises(InvalidParams):
            omega_X(p, n)


def test_very_ample_pattern():
    assert very_ample_pattern(PicClass(1, 1, 2))
    assert not very_ample_pattern(PicClass(1, 1, 0))
    assert not very_ample_pattern(PicClass(2, 1, 1))


def test_fano():
    assert fano_witness(2, 3)
    assert not fano_witness(3, 3)
    assert not fano_witness(3, 4)
    assert fano_witness(2, 3).trace


classes = st.builds(PicClass, st.integers(-20, 20), st.integers(-20, 20), st.integers(-20, 20))


@given(classes, classes, classes, st.integers(-5, 5))
def test_group_law(x, y, z, k):
    assert (x + y) + z == x + (y + z)
    assert x + y == y + x
    assert x - x == PicClass(0, 0, 0)
    assert k * (x + y) == k * x + k * y
    assert -x == (-1) * x
