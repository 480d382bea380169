from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from kvcert.les import DimInterval, InconsistentSequence, solve_sequence


def brute(dims, ranks):
    """All rank vectors consistent with the constraints, by enumeration."""
    m = len(dims)
    cap = max(d.upper for d in dims)
    sols = []
    for rs in product(range(cap + 1), repeat=m - 1):
        full = (0,) + rs + (0,)
        if all(dims[j].contains(full[j] + full[j + 1]) for j in range(m)) and \
                all(r is None or r.contains(full[j + 1]) for j, r in enumerate(ranks[:m - 1])):
            sols.append(full)
    return sols


intervals = st.tuples(st.integers(0, 4), st.integers(0, 3)).map(lambda t: DimInterval(t[0], t[0] + t[1]))
maybe_interval = st.one_of(st.none(), intervals)


@settings(max_examples=200, deadline=None)
@given(st.integers(2, 5).flatmap(lambda m: st.tuples(
    st.lists(intervals, min_size=m, max_size=m),
    st.lists(maybe_interval, min_size=m, max_size=m))))
def test_solver_is_tight(case):
    dims, ranks = case
    sols = brute(dims, ranks)
    if not sols:
        with pytest.raises(InconsistentSequence):
            solve_sequence(dims, ranks)
        return
    out_dims, out_ranks = solve_sequence(dims, ranks)
    for j in range(len(dims)):
        vals = {s[j] + s[j + 1] for s in sols}
        assert (out_dims[j].lower, out_dims[j].upper) == (min(vals), max(vals))
        # every value in between is attained
        assert vals == set(range(min(vals), max(vals) + 1))
    for j in range(len(dims) - 1):
        vals = {s[j + 1] for s in sols}
        assert (out_ranks[j].lower, out_ranks[j].upper) == (min(vals), max(vals))


def test_short_exact_sequence():
    dims, _ = solve_sequence([DimInterval.exact(2), DimInterval.unknown(), DimInterval.exact(3)])
    assert dims[1].is_exact and dims[1].value == 5


def test_unbounded_term_keeps_open_upper():
    dims, _ = solve_sequence([DimInterval.exact(1), DimInterval.unknown(), DimInterval.unknown(),
                              DimInterval.exact(0)])
    assert dims[1].lower == 1 and dims[1].upper is None


def test_inconsistent():
    with pytest.raises(InconsistentSequence):
        solve_sequence([DimInterval.exact(1), DimInterval.exact(0)])


def test_interval_basics():
    assert str(DimInterval(2, 5)) == "[2, 5]"
    assert str(DimInterval(2)) == "[2, inf]"
    assert DimInterval.exact(4).value == 4
    assert DimInterval(1, 2) + DimInterval(3) == DimInterval(4)
    with pytest.raises(ValueError):
        DimInterval(3, 1)
    with pytest.raises(ValueError):
        DimInterval(0, 1).value
