"""Pfaffians of complex skew matrices and quasifree many-point correlators."""
from __future__ import annotations

from typing import Callable, Iterator

import numpy as np

from . import kernels
from .errors import OddDimension, TooLarge

REFERENCE_MAX_N = 10


class SkewMatrix:
    """Complex skew matrix built from the strict upper triangle of the input."""

    __slots__ = ("entries",)

    def __init__(self, a):
        a = np.asarray(a, dtype=np.complex128)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("skew matrix must be square")
        upper = np.triu(a, 1)
        self.entries = upper - upper.T

    @property
    def n(self) -> int:
        return self.entries.shape[0]


def _as_skew(a) -> np.ndarray:
    return a.entries if isinstance(a, SkewMatrix) else SkewMatrix(a).entries


def pfaffian(a) -> complex:
    """Pfaffian by Parlett-Reid elimination with pivoting."""
    m = _as_skew(a)
    if m.shape[0] % 2:
        raise OddDimension(f"dimension {m.shape[0]} is odd")
    if m.shape[0] == 0:
        return 1 + 0j
    return complex(kernels.pfaffian_parlett_reid(m))


def pairings(n: int) -> Iterator[list[tuple[int, int]]]:
    """All perfect matchings of 0..n-1 as sorted pair lists."""
    def rec(rest: list[int]):
        if not rest:
            yield []
            return
        first = rest[0]
        for j in range(1, len(rest)):
            pair = (first, rest[j])
            remaining = rest[1:j] + rest[j + 1:]
            for tail in rec(remaining):
                yield [pair, *tail]
    yield from rec(list(range(n)))


def crossings(pairing: list[tuple[int, int]]) -> int:
    """Number of intersecting arcs when the pairs are drawn above a line."""
    count = 0
    for i, (a, b) in enumerate(pairing):
        for c, d in pairing[i + 1:]:
            if a < c < b < d or c < a < d < b:
                count += 1
    return count


def pfaffian_reference(a) -> complex:
    """Sum over all pairings with sign (-1)^(number of crossings)."""
    m = _as_skew(a)
    n = m.shape[0]
    if n > REFERENCE_MAX_N:
        raise TooLarge(f"pairing enumeration limited to n <= {REFERENCE_MAX_N}, got {n}")
    if n % 2:
        raise OddDimension(f"dimension {n} is odd")
    total = 0j
    for pairing in pairings(n):
        term = -1 if crossings(pairing) % 2 else 1
        for i, j in pairing:
            term = term * m[i, j]
        total += term
    return complex(total)


def quasifree_correlator(two_point: Callable[[int, int], complex], n: int) -> complex:
    """omega(B_1 ... B_n) from the ordered two-point values omega(B_i B_j), i < j."""
    if n % 2:
        return 0j
    if n == 0:
        return 1 + 0j
    a = np.zeros((n, n), dtype=np.complex128)
    for i in range(n):
        for j in range(i + 1, n):
            a[i, j] = two_point(i, j)
    return pfaffian(SkewMatrix(a))
