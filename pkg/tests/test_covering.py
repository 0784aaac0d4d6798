import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from diamcurv.lab.covering import greedy_cover, union_length


def _brute_union(lo, hi, a, b, n=200001):
    x = np.linspace(a, b, n)
    inside = np.zeros(n, bool)
    for l, h in zip(lo, hi):
        inside |= (x > l) & (x < h)
    return inside.mean() * (b - a)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.tuples(st.floats(-1, 11), st.floats(0.01, 3)), min_size=1, max_size=12))
def test_union_length_matches_sampling(iv):
    lo = np.array([c - w for c, w in iv])
    hi = np.array([c + w for c, w in iv])
    assert union_length(lo, hi, 0.0, 10.0) == pytest.approx(_brute_union(lo, hi, 0.0, 10.0), abs=1e-3)


@settings(max_examples=100, deadline=None)
@given(
    n=st.integers(1, 60),
    length=st.floats(0.5, 50.0),
    seed=st.integers(0, 2**31 - 1),
)
def test_greedy_cover_invariants(n, length, seed):
    rng = np.random.default_rng(seed)
    s = np.sort(rng.uniform(0, length, n))
    r = rng.uniform(0.001, 0.2, n) * length
    res = greedy_cover(s, r, length=length)
    sa, ra = res.positions, res.radii
    # pairwise disjoint
    for i in range(len(sa)):
        for j in range(i + 1, len(sa)):
            assert abs(sa[i] - sa[j]) > ra[i] + ra[j]
    assert res.disjoint and res.three_r_cover
    # every candidate center lies in a 3r-dilation
    for si in s:
        assert np.any(np.abs(si - sa) < 3 * ra)
    # the 3r-dilations cover a length of at most 3 * sum of diameters
    assert res.sum_diameters >= res.covered_length / 3 - 1e-12 * length
    assert 0.0 <= res.covered_fraction <= 1.0


def test_greedy_cover_tie_break_and_order():
    res = greedy_cover([0.0, 1.0, 2.0], [0.6, 0.6, 0.6], length=2.0)
    # equal radii: lowest index first, then index 2 (disjoint from 0)
    assert res.accepted.tolist() == [0, 2]


def test_greedy_cover_rejects_bad_input():
    with pytest.raises(ValueError):
        greedy_cover([], [])
    with pytest.raises(ValueError):
        greedy_cover([0.0], [0.0])
    with pytest.raises(ValueError):
        greedy_cover([0.0, 1.0], [1.0])
