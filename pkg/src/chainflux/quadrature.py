"""Composite adaptive Gauss-Legendre quadrature for piecewise-smooth integrands."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import QuadratureNotConverged

GL_ORDER = 32
MAX_DEPTH = 60
# panels narrower than this many ulps of their location cannot be bisected meaningfully
FLOOR_ULPS = 64
MAX_PANELS = 200_000
_EPS = float(np.finfo(float).eps)
_NODES, _WEIGHTS = np.polynomial.legendre.leggauss(GL_ORDER)


def gauss_legendre(f: Callable[[np.ndarray], np.ndarray], a: float, b: float) -> float:
    half = 0.5 * (b - a)
    x = 0.5 * (a + b) + half * _NODES
    return float(half * np.dot(_WEIGHTS, f(x)))


@dataclass
class QuadResult:
    value: float
    error: float
    panels: list[tuple[float, float]] = field(default_factory=list)

    @property
    def subintervals(self) -> int:
        return len(self.panels)


def _clean_breaks(a: float, b: float, breaks: Sequence[float]) -> list[float]:
    pts = sorted({a, b, *(float(x) for x in breaks if a < x < b)})
    out = [pts[0]]
    for x in pts[1:]:
        if x - out[-1] > 1e-12:
            out.append(x)
    out[-1] = b
    return out


def integrate(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    breaks: Sequence[float] = (),
    tol: float = 1e-10,
) -> QuadResult:
    """Integrate f over [a, b], starting from panels split at ``breaks``.

    Each panel is bisected until the one-panel and two-half-panel rules agree
    within the panel's share of ``tol``; the accepted value is the two-half
    estimate and the reported error is the sum of the disagreements plus a
    rounding floor. A share below the rounding noise of the panel's own
    value cannot be verified by bisection and is reported as unreachable.

    A panel that has shrunk to a few ulps (a jump located only to rounding
    accuracy) is accepted as is and its disagreement is booked as
    unverified error; if those exceed ``tol`` the tolerance is unreachable.
    """
    pts = _clean_breaks(a, b, breaks)
    total_len = b - a
    value = 0.0
    err = 0.0
    unverified = 0.0
    abs_mass = 0.0
    panels: list[tuple[float, float]] = []
    stack = [(pts[i], pts[i + 1], 0, None) for i in range(len(pts) - 1)]
    while stack:
        lo, hi, depth, coarse = stack.pop()
        if coarse is None:
            coarse = gauss_legendre(f, lo, hi)
        mid = 0.5 * (lo + hi)
        left = gauss_legendre(f, lo, mid)
        right = gauss_legendre(f, mid, hi)
        fine = left + right
        diff = abs(fine - coarse)
        share = tol * (hi - lo) / total_len
        noise = 16.0 * _EPS * (abs(left) + abs(right))
        at_floor = hi - lo <= FLOOR_ULPS * _EPS * max(1.0, abs(lo), abs(hi))
        if share < noise and not at_floor:
            # share and noise both scale with the width, so bisection cannot help
            raise QuadratureNotConverged(
                f"tol={tol:.3g} is below the rounding noise of the integral on [{lo:.6g}, {hi:.6g}]"
            )
        if diff <= share or at_floor:
            value += fine
            err += diff
            if at_floor:
                unverified += diff
            abs_mass += abs(left) + abs(right)
            panels.append((lo, mid))
            panels.append((mid, hi))
            continue
        if len(panels) > MAX_PANELS:
            raise QuadratureNotConverged(f"more than {MAX_PANELS} panels needed for tol={tol:.3g}")
        if depth >= MAX_DEPTH:
            raise QuadratureNotConverged(
                f"panel [{lo:.6g}, {hi:.6g}] still disagrees by {diff:.3g} after {depth} bisections"
            )
        stack.append((mid, hi, depth + 1, right))
        stack.append((lo, mid, depth + 1, left))
    if unverified > tol:
        raise QuadratureNotConverged(
            f"panels at the rounding floor disagree by {unverified:.3g} in total, above tol={tol:.3g}"
        )
    err += 4.0 * _EPS * max(abs_mass, abs(value)) * math.sqrt(len(panels))
    panels.sort()
    return QuadResult(value=value, error=err, panels=panels)


def integrate_panels(f: Callable[[np.ndarray], np.ndarray], panels: Sequence[tuple[float, float]]) -> float:
    """Sum of the fixed rule over given panels, each split once more."""
    total = 0.0
    for lo, hi in panels:
        mid = 0.5 * (lo + hi)
        total += gauss_legendre(f, lo, mid) + gauss_legendre(f, mid, hi)
    return total
