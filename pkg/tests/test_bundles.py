from itertools import product

import numpy as np
import pytest

from kvcert.bundles import (
    BundleCalculus,
    EtaMap,
    Sheaf,
    eta1_map,
    eta1_matrix,
    eta2_map,
    euler_column,
    h0_FstarB,
    h1_FstarB,
    h1_FstarG,
    h1_sym2FstarB_lower,
    h1_sym2FstarG_lower,
    les_solve,
    polarization,
)
from kvcert.errors import ContainmentFailed, HypothesisFailed
from kvcert.ffield import FpMatrix, image, rank
from kvcert.ring import basis_R, normal_form

N = 3


def coordinate_span(n, twist, keep):
    """Subspace of H^0(O(twist)) spanned by the basis monomials satisfying ``keep``."""
    basis = basis_R(n, *twist)
    cols = [[int(k == j) for k in range(len(basis))] for j, m in enumerate(basis) if keep(m)]
    return image(FpMatrix(2, np.array(cols, dtype=np.int64).T.reshape(len(basis), len(cols))))


def test_images_at_origin_are_monomial_spans():
    r = h1_sym2FstarB_lower(0, 0, 2, N)
    some_square = coordinate_span(N, (0, 4), lambda m: max(m.beta) >= 2)
    all_even = coordinate_span(N, (0, 4), lambda m: all(e % 2 == 0 for e in m.beta))
    assert some_square.dim == 34 and all_even.dim == 10
    assert r.im_eta1.canonical_bytes() == some_square.canonical_bytes()
    assert r.im_eta2.canonical_bytes() == all_even.canonical_bytes()
    assert r.gap == 24
    assert r.target_dim == 35


def test_cokernel_of_eta1():
    h = h1_FstarB(0, 0)
    assert (h.value, h.target_dim, h.image_dim) == (6, 10, 4)
    h = h1_FstarB(0, 1)
    assert (h.value, h.target_dim, h.image_dim) == (4, 20, 16)
    witness = coordinate_span(N, (0, 3), lambda m: max(m.beta) >= 2)
    assert h.image().canonical_bytes() == witness.canonical_bytes()
    assert h1_FstarB(-1, 5).value == 0 and h1_FstarB(-1, 5).shortcut


def test_global_sections_of_FstarB():
    assert h0_FstarB(0, 2) == 6  # Koszul syzygies among y_i^2
    assert h0_FstarB(0, 0) == 0
    assert h0_FstarB(-1, 3) == 0
    assert h0_FstarB(2, -1) == 0


def test_hypotheses():
    with pytest.raises(HypothesisFailed):
        h1_FstarB(0, 0, 2, 2)
    with pytest.raises(HypothesisFailed):
        h1_sym2FstarB_lower(-1, 0)
    with pytest.raises(HypothesisFailed):
        h1_sym2FstarB_lower(0, -3)
    for p in (2, 3):
        with pytest.raises(HypothesisFailed):
            h1_sym2FstarG_lower(p, 0, p, N)


def test_containment_failure_is_reported():
    bad = eta1_matrix(2, N, (0, 2), drop_block=0)
    with pytest.raises(ContainmentFailed):
        h1_sym2FstarB_lower(0, 0, 2, N, eta1_override=bad)


@pytest.mark.parametrize("p", [2, 3])
def test_eta2_image_inside_eta1_image(p):
    for a, b in product(range(0, 3), range(-2, 3)):
        r = h1_sym2FstarB_lower(a, b, p, N)
        assert r.gap == r.im_eta1.dim - r.im_eta2.dim >= 0
        # the gap is a lower bound, so the solver must leave room for it
        assert r.interval.upper is None or r.interval.upper >= r.gap


@pytest.mark.parametrize("p", [2, 3, 5])
def test_map_identities(p):
    for twist in ((0, 0), (1, 2), (2, -1)):
        # eta1 kills the Euler column: sum x_i^p y_i^p = q^p
        comp = eta1_map(p, N, twist).compose(euler_column(p, N, twist))
        assert all(normal_form(g).is_zero() for g in comp.entries.values())
        assert eta1_map(p, N, twist).compose(euler_column(p, N, twist)).induced(0).is_zero()
        # eta1 after polarization is twice eta2
        a, b = twist
        lhs = eta1_map(p, N, (a, b + p)).compose(polarization(p, N, twist)).induced(0)
        rhs = eta2_map(p, N, twist).induced(0)
        assert lhs == FpMatrix(p, 2 * rhs.data)


@pytest.mark.parametrize("p", [2, 3])
def test_sparse_and_dense_ranks_agree(p):
    makers = (eta1_map, eta2_map, euler_column, polarization)
    for a, b in product(range(-5, 2), repeat=2):
        for make in makers:
            pm = make(p, N, (a, b))
            for i in (0, 2, 3, 4, 5):
                assert pm.induced_rank(i) == rank(pm.induced(i)), (make.__name__, a, b, i)


def test_eta_map_record():
    e = EtaMap.build("eta1", 2, N, (0, 0))
    assert e.matrix.shape == (10, 4)
    assert rank(e.matrix) == 4


@pytest.mark.parametrize("p", [2, 3])
def test_two_routes_agree(p):
    for a, b in product(range(-4, 4), repeat=2):
        iv = les_solve(Sheaf("FstarB", (a, b)), 1, p, N)
        assert iv.is_exact and iv.value == h1_FstarB(a, b, p, N).value
        iv0 = les_solve(Sheaf("FstarB", (a, b)), 0, p, N)
        assert iv0.is_exact and iv0.value == h0_FstarB(a, b, p, N)


def test_les_queries_at_origin():
    assert les_solve(Sheaf("FstarB", (0, 0)), 1).value == 6
    assert les_solve(Sheaf("Sym2FstarB", (0, 0)), 0).value == 0
    iv = les_solve(Sheaf("Sym2FstarB", (0, 0)), 1)
    assert iv.lower >= 24 and iv.upper is not None and iv.upper >= iv.lower


def test_solver_does_not_depend_on_fill_order():
    queries = [Sheaf(k, t) for k in ("Sym2FstarG", "Sym2FstarB", "FstarG", "E", "Fsym")
               for t in ((1, 5), (0, 0), (-1, 5), (1, 3))]
    forward, backward = BundleCalculus(2, N), BundleCalculus(2, N)
    got_f = {s: forward.cohomology(s) for s in queries}
    got_b = {s: backward.cohomology(s) for s in reversed(queries)}
    assert got_f == got_b


def test_FstarG():
    g = h1_FstarG(1, 5)
    assert g.side_conditions_hold and g.exact
    assert g.interval.value == h1_FstarB(1, 5).value
    assert h1_FstarG(0, 0).interval.value == 6
    g = h1_FstarG(-1, 5)
    assert not g.side_conditions_hold
    assert g.interval.lower <= g.interval.upper


def test_sym2G_steps():
    r = h1_sym2FstarG_lower(1, 5, 2, N)
    labels = [s.label for s in r.steps]
    assert labels[-1] == "injection-Sym2B-Sym2G"
    assert all(s.recipe for s in r.steps if s.status == "COMPUTED")
    assert r.interval.lower >= r.lower
