"""Real trigonometric polynomials on the torus [-pi, pi].

A polynomial of degree d is stored as

    p(k) = const + sum_{m=1..d} 2*cos_coeff[m]*cos(mk) + 2*sin_coeff[m]*sin(mk)

Coefficients may be ``Fraction`` (exact arithmetic, used for classification)
or ``float``; the arithmetic below only uses +, -, * and halving, so exact
inputs stay exact.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Real
from typing import Iterable, Sequence

import numpy as np

from .errors import IdenticallyZero

TWO_PI = 2.0 * math.pi
ROOT_K_TOL = 1e-13
ENDPOINT_TOL = 1e-10


def _half(x):
    if isinstance(x, Fraction):
        return x / 2
    if isinstance(x, int):
        return Fraction(x, 2)
    return 0.5 * x


def _trim_len(cos: Sequence, sin: Sequence) -> int:
    return max(len(cos), len(sin))


@dataclass(frozen=True)
class TrigPoly:
    const_term: Real = 0
    cos_coeff: tuple = ()
    sin_coeff: tuple = ()
    _fc: np.ndarray = field(init=False, repr=False, compare=False)
    _fs: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        d = _trim_len(self.cos_coeff, self.sin_coeff)
        cos = tuple(self.cos_coeff) + (0,) * (d - len(self.cos_coeff))
        sin = tuple(self.sin_coeff) + (0,) * (d - len(self.sin_coeff))
        object.__setattr__(self, "cos_coeff", cos)
        object.__setattr__(self, "sin_coeff", sin)
        object.__setattr__(self, "_fc", np.array([float(c) for c in cos], dtype=float))
        object.__setattr__(self, "_fs", np.array([float(s) for s in sin], dtype=float))

    # -- construction helpers -------------------------------------------------
    @classmethod
    def zero(cls) -> "TrigPoly":
        return cls(0, (), ())

    @classmethod
    def constant(cls, c) -> "TrigPoly":
        return cls(c, (), ())

    @classmethod
    def from_raw(cls, cos_raw: dict, sin_raw: dict) -> "TrigPoly":
        """Build from plain Fourier form sum_m C_m cos(mk) + S_m sin(mk)."""
        d = max([0, *cos_raw.keys(), *sin_raw.keys()])
        const = cos_raw.get(0, 0)
        cos = tuple(_half(cos_raw.get(m, 0)) for m in range(1, d + 1))
        sin = tuple(_half(sin_raw.get(m, 0)) for m in range(1, d + 1))
        return cls(const, cos, sin)

    @property
    def d(self) -> int:
        return len(self.cos_coeff)

    def raw_terms(self) -> Iterable[tuple[int, Real, Real]]:
        """Yield (m, C_m, S_m) with p = sum C_m cos(mk) + S_m sin(mk)."""
        yield 0, self.const_term, 0
        for m, (c, s) in enumerate(zip(self.cos_coeff, self.sin_coeff), start=1):
            yield m, 2 * c, 2 * s

    # -- predicates -----------------------------------------------------------
    def is_zero(self) -> bool:
        return self.const_term == 0 and all(c == 0 for c in self.cos_coeff) and all(
            s == 0 for s in self.sin_coeff
        )

    def is_constant(self) -> bool:
        return all(c == 0 for c in self.cos_coeff) and all(s == 0 for s in self.sin_coeff)

    def coeff_equal(self, other: "TrigPoly") -> bool:
        return (self - other).is_zero()

    def norm1(self) -> float:
        return abs(float(self.const_term)) + float(np.abs(self._fc).sum() + np.abs(self._fs).sum())

    # -- numerics -------------------------------------------------------------
    def eval(self, k):
        """Evaluate at scalar or array k by direct summation."""
        k_arr = np.asarray(k, dtype=float)
        out = np.full(k_arr.shape, float(self.const_term))
        for m in range(1, self.d + 1):
            c, s = self._fc[m - 1], self._fs[m - 1]
            if c != 0.0:
                out = out + 2.0 * c * np.cos(m * k_arr)
            if s != 0.0:
                out = out + 2.0 * s * np.sin(m * k_arr)
        if np.ndim(k) == 0:
            return float(out)
        return out

    __call__ = eval

    # -- algebra --------------------------------------------------------------
    def derivative(self) -> "TrigPoly":
        cos = tuple(m * s for m, s in enumerate(self.sin_coeff, start=1))
        sin = tuple(-m * c for m, c in enumerate(self.cos_coeff, start=1))
        return TrigPoly(0, cos, sin)

    def __add__(self, other: "TrigPoly") -> "TrigPoly":
        d = max(self.d, other.d)
        a, b = self._padded(d), other._padded(d)
        return TrigPoly(
            self.const_term + other.const_term,
            tuple(x + y for x, y in zip(a[0], b[0])),
            tuple(x + y for x, y in zip(a[1], b[1])),
        )

    def __neg__(self) -> "TrigPoly":
        return self.scale(-1)

    def __sub__(self, other: "TrigPoly") -> "TrigPoly":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, TrigPoly):
            return multiply(self, other)
        return self.scale(other)

    __rmul__ = __mul__

    def scale(self, factor) -> "TrigPoly":
        return TrigPoly(
            self.const_term * factor,
            tuple(c * factor for c in self.cos_coeff),
            tuple(s * factor for s in self.sin_coeff),
        )

    def _padded(self, d: int) -> tuple[tuple, tuple]:
        pad = (0,) * (d - self.d)
        return self.cos_coeff + pad, self.sin_coeff + pad

    def trimmed(self) -> "TrigPoly":
        """Drop trailing zero harmonics."""
        d = self.d
        while d > 0 and self.cos_coeff[d - 1] == 0 and self.sin_coeff[d - 1] == 0:
            d -= 1
        return TrigPoly(self.const_term, self.cos_coeff[:d], self.sin_coeff[:d])

    def to_float(self) -> "TrigPoly":
        return TrigPoly(float(self.const_term), tuple(self._fc.tolist()), tuple(self._fs.tolist()))


def eval(p: TrigPoly, k):  # noqa: A001 - mirrors the operation name
    return p.eval(k)


def derivative(p: TrigPoly) -> TrigPoly:
    return p.derivative()


def multiply(p: TrigPoly, q: TrigPoly) -> TrigPoly:
    """Exact product via product-to-sum identities; degree d_p + d_q."""
    cos_raw: dict[int, Real] = {}
    sin_raw: dict[int, Real] = {}

    def add(store, m, v):
        if v != 0:
            store[m] = store.get(m, 0) + v

    def add_cos(m, v):
        add(cos_raw, abs(m), v)

    def add_sin(m, v):
        if m < 0:
            add(sin_raw, -m, -v)
        elif m > 0:
            add(sin_raw, m, v)

    for m, cp, sp in p.raw_terms():
        if cp == 0 and sp == 0:
            continue
        for n, cq, sq in q.raw_terms():
            if cq == 0 and sq == 0:
                continue
            if cp != 0 and cq != 0:
                h = _half(cp * cq)
                add_cos(m - n, h)
                add_cos(m + n, h)
            if sp != 0 and sq != 0:
                h = _half(sp * sq)
                add_cos(m - n, h)
                add_cos(m + n, -h)
            if cp != 0 and sq != 0:
                h = _half(cp * sq)
                add_sin(n + m, h)
                add_sin(n - m, h)
            if sp != 0 and cq != 0:
                h = _half(sp * cq)
                add_sin(m + n, h)
                add_sin(m - n, h)

    out = TrigPoly.from_raw(cos_raw, sin_raw)
    d = p.d + q.d
    if out.d < d:
        cos, sin = out._padded(d)
        out = TrigPoly(out.const_term, cos, sin)
    return out


def square(p: TrigPoly) -> TrigPoly:
    return multiply(p, p)


def _bisect(f, a: float, b: float, fa: float, tol: float = ROOT_K_TOL) -> float:
    while b - a > tol:
        mid = 0.5 * (a + b)
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (fm < 0.0) == (fa < 0.0):
            a, fa = mid, fm
        else:
            b = mid
    return 0.5 * (a + b)


def _golden_min(f, a: float, b: float, tol: float = 1e-9) -> float:
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c, d = b - invphi * (b - a), a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def _wrap(k: float) -> float:
    """Map to (-pi, pi], reporting -pi as +pi."""
    k = (k + math.pi) % TWO_PI - math.pi
    if k <= -math.pi + ENDPOINT_TOL:
        k = math.pi
    return k


def zeros(p: TrigPoly, tol: float = 1e-10) -> list[float]:
    """Sorted roots of p on the torus.

    Sign changes on a uniform periodic scan are bisected; local minima of |p|
    without a sign change are refined at the stationary point of p (bisection
    of p', golden-section fallback) and kept if |p| < tol there. A stationary
    point where p flips sign relative to its neighbours splits a cell holding
    two close simple roots.
    """
    if p.is_zero():
        raise IdenticallyZero("zeros() of the zero polynomial")
    if p.is_constant():
        return []
    pf = p.to_float()
    dp = pf.derivative()
    f = pf.eval
    n = max(512, 64 * p.d)
    ks = -math.pi + TWO_PI * np.arange(n + 1) / n
    vals = pf.eval(ks)
    vals[n] = vals[0]
    roots: list[float] = []

    for i in range(n):
        a, b, fa, fb = ks[i], ks[i + 1], vals[i], vals[i + 1]
        if fa == 0.0:
            roots.append(float(a))
        elif fa * fb < 0.0:
            roots.append(_bisect(f, float(a), float(b), float(fa)))

    absv = np.abs(vals[:n])
    for i in range(n):
        left, right = absv[(i - 1) % n], absv[(i + 1) % n]
        if not (absv[i] <= left and absv[i] <= right) or absv[i] == 0.0:
            continue
        if vals[(i - 1) % n] * vals[i] < 0 or vals[i] * vals[(i + 1) % n] < 0:
            continue
        a, b = float(ks[i] - TWO_PI / n), float(ks[i] + TWO_PI / n)
        da, db = dp.eval(a), dp.eval(b)
        if da * db < 0.0:
            kc = _bisect(dp.eval, a, b, da)
        else:
            kc = _golden_min(lambda x: abs(f(x)), a, b)
        fc = f(kc)
        if abs(fc) < tol:
            roots.append(kc)
        elif fc * vals[i] < 0.0:
            roots.append(_bisect(f, a, kc, f(a)))
            roots.append(_bisect(f, kc, b, fc))

    wrapped = sorted(_wrap(r) for r in roots)
    out: list[float] = []
    for r in wrapped:
        if out and abs(r - out[-1]) < 1e-9:
            continue
        out.append(r)
    if len(out) > 1 and out[0] + TWO_PI - out[-1] < 1e-9:
        out.pop(0)
    return out
