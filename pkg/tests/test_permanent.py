import math
from itertools import permutations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hbtphase.errors import CapacityError
from hbtphase.permanent import permanent_naive, permanent_ryser


def derangements(n):
    return round(math.factorial(n) * sum((-1) ** k / math.factorial(k) for k in range(n + 1)))


@pytest.mark.parametrize("n", range(1, 9))
def test_all_ones(n):
    assert permanent_ryser(np.ones((n, n))) == pytest.approx(math.factorial(n))


@pytest.mark.parametrize("n", range(2, 9))
def test_derangement_count(n):
    assert permanent_ryser(np.ones((n, n)) - np.eye(n)) == pytest.approx(derangements(n))


def test_empty_matrix():
    assert permanent_ryser(np.zeros((0, 0))) == 1


def test_diagonal():
    d = np.array([2.0, 3.0, -1.5, 1j])
    assert permanent_ryser(np.diag(d)) == pytest.approx(np.prod(d))


@settings(max_examples=40)
@given(st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_ryser_matches_expansion(n, seed):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    brute = sum(np.prod([a[i, p[i]] for i in range(n)]) for p in permutations(range(n)))
    assert abs(permanent_ryser(a) - brute) < 1e-10 * max(1.0, abs(brute))
    assert abs(permanent_naive(a) - brute) < 1e-10 * max(1.0, abs(brute))


@settings(max_examples=30)
@given(st.integers(2, 6), st.integers(0, 2**32 - 1))
def test_permutation_invariance(n, seed):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    rows, cols = rng.permutation(n), rng.permutation(n)
    assert abs(permanent_ryser(a[rows][:, cols]) - permanent_ryser(a)) < 1e-10 * max(1.0, abs(permanent_ryser(a)))


def test_capacity_cap():
    with pytest.raises(CapacityError):
        permanent_ryser(np.ones((9, 9)))
    assert permanent_ryser(np.ones((9, 9)), max_size=9) == pytest.approx(math.factorial(9))


def test_rejects_non_square():
    with pytest.raises(ValueError):
        permanent_ryser(np.ones((2, 3)))
