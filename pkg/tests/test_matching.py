import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from htsim.matching import (brute_force_mwpm, greedy_pairing, matching_weight,
                            max_weight_perfect_matching, mwpm)


def _random_metric(rng, n, span=20):
    pts = rng.integers(0, span, size=(n, 2))
    d = np.abs(pts[:, None, :] - pts[None, :, :]).sum(axis=2)
    np.fill_diagonal(d, 0)
    return d


def test_two_defects_unique_pairing():
    d = np.array([[0, 5], [5, 0]])
    assert mwpm(d) == [(0, 1)]


def test_rectangle_prefers_sides():
    # corners of a 1 x 10 rectangle: sides beat diagonals
    pts = np.array([[0, 0], [1, 0], [0, 10], [1, 10]])
    d = np.abs(pts[:, None, :] - pts[None, :, :]).sum(axis=2)
    pairs = mwpm(d)
    assert matching_weight(d, pairs) == 2


def test_odd_count_rejected():
    with pytest.raises(ValueError):
        mwpm(np.zeros((3, 3), dtype=int))


def test_exact_on_random_instances():
    rng = np.random.default_rng(7)
    for _ in range(300):
        n = int(rng.integers(1, 6)) * 2
        d = rng.integers(1, 30, size=(n, n))
        d = d + d.T
        np.fill_diagonal(d, 0)
        assert matching_weight(d, mwpm(d)) == \
            matching_weight(d, brute_force_mwpm(d))


def test_exact_on_metric_instances():
    rng = np.random.default_rng(11)
    for _ in range(100):
        n = int(rng.integers(1, 6)) * 2
        d = _random_metric(rng, n)
        assert matching_weight(d, mwpm(d)) == \
            matching_weight(d, brute_force_mwpm(d))


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=1, max_value=4), st.integers(min_value=0, max_value=10**6))
def test_mwpm_never_beaten_by_greedy(half, seed):
    rng = np.random.default_rng(seed)
    n = 2 * half
    d = rng.integers(1, 50, size=(n, n))
    d = d + d.T
    np.fill_diagonal(d, 0)
    assert matching_weight(d, mwpm(d)) <= matching_weight(d, greedy_pairing(d))


def test_jitted_matches_reference_implementation():
    rng = np.random.default_rng(3)
    for _ in range(20):
        n = int(rng.integers(4, 16)) * 2
        d = _random_metric(rng, n, span=30)
        big = int(d.max()) * n + 1
        W = big - d
        np.fill_diagonal(W, 0)
        m1 = max_weight_perfect_matching(W)
        m2 = max_weight_perfect_matching(W, reference=True)
        w1 = sum(int(W[i, m1[i]]) for i in range(n))
        w2 = sum(int(W[i, m2[i]]) for i in range(n))
        assert w1 == w2


def test_deterministic():
    rng = np.random.default_rng(5)
    d = _random_metric(rng, 20)
    assert mwpm(d) == mwpm(d.copy())
