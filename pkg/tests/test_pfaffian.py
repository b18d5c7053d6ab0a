import math
from itertools import permutations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from chainflux.errors import OddDimension, TooLarge
from chainflux.pfaffian import (SkewMatrix, crossings, pairings, pfaffian, pfaffian_reference,
                                quasifree_correlator)


def skew(rng, n):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return a - a.T


def leibniz_pfaffian(a):
    """Sum over all permutations with 1/(2^m m!) normalization."""
    n = a.shape[0]
    m = n // 2
    total = 0j
    for perm in permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = (-1) ** inv
        for i in range(m):
            term *= a[perm[2 * i], perm[2 * i + 1]]
        total += term
    return total / (2 ** m * math.factorial(m))


def test_skew_matrix_uses_upper_triangle():
    s = SkewMatrix([[9, 1, 2], [7, 9, 3], [7, 7, 9]])
    assert np.array_equal(s.entries, [[0, 1, 2], [-1, 0, 3], [-2, -3, 0]])
    assert s.n == 3
    with pytest.raises(ValueError):
        SkewMatrix(np.zeros((2, 3)))


def test_two_by_two():
    assert pfaffian([[0, 2.5 - 1j], [0, 0]]) == 2.5 - 1j


def test_four_by_four_formula(rng):
    a = skew(rng, 4)
    expected = a[0, 1] * a[2, 3] - a[0, 2] * a[1, 3] + a[0, 3] * a[1, 2]
    assert abs(pfaffian(a) - expected) < 1e-13
    assert abs(pfaffian_reference(a) - expected) < 1e-13


def test_empty_is_one():
    assert pfaffian(np.zeros((0, 0))) == 1


@pytest.mark.parametrize("n, count", [(2, 1), (4, 3), (6, 15), (8, 105)])
def test_pairing_count(n, count):
    ps = list(pairings(n))
    assert len(ps) == count
    assert len({tuple(p) for p in ps}) == count
    for p in ps:
        assert sorted(i for pair in p for i in pair) == list(range(n))


def test_crossings():
    assert crossings([(0, 1), (2, 3)]) == 0
    assert crossings([(0, 2), (1, 3)]) == 1
    assert crossings([(0, 3), (1, 2)]) == 0


@pytest.mark.parametrize("n", [2, 4, 6])
def test_reference_matches_leibniz(n, rng):
    a = skew(rng, n)
    assert abs(pfaffian_reference(a) - leibniz_pfaffian(a)) < 1e-11


@pytest.mark.parametrize("n", [2, 4, 6, 8])
def test_elimination_matches_reference(n, rng):
    for _ in range(5):
        a = skew(rng, n)
        ref = pfaffian_reference(a)
        assert abs(pfaffian(a) - ref) <= 1e-11 * max(1.0, abs(ref))


def test_zero_and_block_diagonal(rng):
    assert pfaffian(np.zeros((6, 6))) == 0
    a, b = skew(rng, 4), skew(rng, 2)
    block = np.zeros((6, 6), dtype=complex)
    block[:4, :4], block[4:, 4:] = a, b
    assert abs(pfaffian(block) - pfaffian(a) * pfaffian(b)) < 1e-12


@given(st.integers(0, 2**32 - 1), st.integers(1, 6))
def test_swap_negates_and_square_is_det(seed, m):
    rng = np.random.default_rng(seed)
    n = 2 * m
    a = skew(rng, n)
    i, j = rng.choice(n, 2, replace=False)
    p = np.arange(n)
    p[[i, j]] = p[[j, i]]
    pf = pfaffian(a)
    assert abs(pfaffian(a[np.ix_(p, p)]) + pf) <= 1e-10 * max(1.0, abs(pf))
    det = np.linalg.det(a)
    assert abs(pf * pf - det) <= 1e-9 * abs(det)


def test_congruence_scales_by_det(rng):
    a, b = skew(rng, 6), rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
    assert abs(pfaffian(b @ a @ b.T) - np.linalg.det(b) * pfaffian(a)) < 1e-9 * abs(pfaffian(b @ a @ b.T))


def test_errors():
    with pytest.raises(OddDimension):
        pfaffian(np.zeros((3, 3)))
    with pytest.raises(OddDimension):
        pfaffian_reference(np.zeros((5, 5)))
    with pytest.raises(TooLarge):
        pfaffian_reference(np.zeros((12, 12)))


def test_correlator_small_orders():
    calls = []

    def two(i, j):
        calls.append((i, j))
        return 0.3 + 0.1j
    assert quasifree_correlator(two, 3) == 0
    assert quasifree_correlator(two, 0) == 1
    assert quasifree_correlator(two, 2) == 0.3 + 0.1j
    assert calls == [(0, 1)]


def test_correlator_four_point_wick(rng):
    w = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    val = quasifree_correlator(lambda i, j: w[i, j], 4)
    assert abs(val - (w[0, 1] * w[2, 3] - w[0, 2] * w[1, 3] + w[0, 3] * w[1, 2])) < 1e-13
