"""Translation-invariant finite-range selfdual chains: symbols and case classification.

Hopping coefficients are kept as exact ``Fraction`` values so the six-way
case split is decided by coefficient arithmetic, never by a tolerance.
Floats are converted through their shortest decimal repr, so ``0.3`` means
3/10 exactly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import InvalidModel
from .fermi import FermiSpec
from .trigpoly import TrigPoly, square, zeros

# |u|^2 below this counts as a zero of u: |u| at the rounding level of its components
Z_U_TOL = 1e-28


def exact(x) -> Fraction:
    """Exact rational value of a coefficient."""
    if isinstance(x, bool):
        raise InvalidModel(f"boolean is not a coefficient: {x!r}")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise InvalidModel(f"non-finite coefficient {x!r}")
        return Fraction(repr(x))
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, (np.floating, np.integer)):
        return exact(x.item())
    raise InvalidModel(f"unsupported coefficient type {type(x).__name__}")


def _coeff_array(values, nu: int, name: str) -> tuple[Fraction, ...]:
    if values is None:
        return (Fraction(0),) * nu
    vals = tuple(exact(v) for v in values)
    if len(vals) != nu:
        raise InvalidModel(f"{name} must have exactly nu={nu} entries, got {len(vals)}")
    return vals


@dataclass(frozen=True)
class ModelSpec:
    nu: int
    c0: Sequence = None
    c1: Sequence = None
    c2: Sequence = None
    c3_0: object = 0
    c3: Sequence = None
    beta_L: float = 1.0
    beta_R: float = 1.0
    fermi: FermiSpec = field(default_factory=FermiSpec.fermi_dirac)
    beta_S: float | None = None

    def __post_init__(self):
        if isinstance(self.nu, bool) or not isinstance(self.nu, (int, np.integer)) or self.nu < 1:
            raise InvalidModel(f"nu must be a positive integer, got {self.nu!r}")
        nu = int(self.nu)
        object.__setattr__(self, "nu", nu)
        for name in ("c0", "c1", "c2", "c3"):
            object.__setattr__(self, name, _coeff_array(getattr(self, name), nu, name))
        object.__setattr__(self, "c3_0", exact(self.c3_0))
        for name in ("beta_L", "beta_R"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if self.beta_S is not None:
            object.__setattr__(self, "beta_S", float(self.beta_S))
        if self.c3_0 == 0 and all(c == 0 for arr in (self.c0, self.c1, self.c2, self.c3) for c in arr):
            raise InvalidModel("all hopping coefficients vanish (H = 0)")

    def coeff(self, alpha: int, n: int) -> Fraction:
        """c_{alpha,n} with c_{alpha,0} = 0 for alpha < 3 and zero outside the range."""
        if n < 0 or n > self.nu:
            return Fraction(0)
        if alpha == 3:
            return self.c3_0 if n == 0 else self.c3[n - 1]
        if n == 0:
            return Fraction(0)
        return (self.c0, self.c1, self.c2)[alpha][n - 1]

    def with_betas(self, beta_L: float, beta_R: float) -> "ModelSpec":
        from dataclasses import replace

        return replace(self, beta_L=beta_L, beta_R=beta_R)

    @property
    def beta_sample(self) -> float:
        return self.beta_S if self.beta_S is not None else 0.5 * (self.beta_L + self.beta_R)


def pauli_symbol(m: ModelSpec) -> tuple[TrigPoly, TrigPoly, TrigPoly, TrigPoly]:
    """(u0, u1, u2, u3) with u_a = -2 sum c_{a,n} sin(nk) and u3 = c_{3,0} + 2 sum c_{3,n} cos(nk)."""
    zeros_nu = (Fraction(0),) * m.nu
    odd = tuple(TrigPoly(Fraction(0), zeros_nu, tuple(-c for c in arr)) for arr in (m.c0, m.c1, m.c2))
    u3 = TrigPoly(m.c3_0, tuple(m.c3), zeros_nu)
    return odd + (u3,)


def position_symbol(m: ModelSpec) -> dict[int, tuple[complex, complex, complex, complex]]:
    """Lattice kernel x -> (u0v(x), ..., u3v(x)) for x in -nu..nu."""
    out = {}
    for x in range(-m.nu, m.nu + 1):
        n = abs(x)
        vals = []
        for alpha in range(3):
            c = float(m.coeff(alpha, n))
            vals.append(complex(0.0, c if x > 0 else (-c if x < 0 else 0.0)))
        vals.append(complex(float(m.coeff(3, n)), 0.0))
        out[x] = tuple(vals)
    return out


@dataclass(frozen=True)
class SymbolAlgebra:
    """Exact polynomial building blocks derived from a model."""

    u0: TrigPoly
    u: tuple[TrigPoly, TrigPoly, TrigPoly]
    u0p: TrigPoly
    up: tuple[TrigPoly, TrigPoly, TrigPoly]
    usq: TrigPoly       # |u|^2
    uup: TrigPoly       # u . u'
    u0sq: TrigPoly
    p0: TrigPoly        # u0^2 - |u|^2 = e+ e-
    p_vel: TrigPoly     # u0'^2 |u|^2 - (u.u')^2
    q_vel: TrigPoly     # u0'^2 - |u'|^2


def symbol_algebra(m: ModelSpec) -> SymbolAlgebra:
    u0, u1, u2, u3 = pauli_symbol(m)
    u = (u1, u2, u3)
    u0p = u0.derivative()
    up = tuple(x.derivative() for x in u)
    usq = square(u1) + square(u2) + square(u3)
    uup = u1 * up[0] + u2 * up[1] + u3 * up[2]
    u0sq = square(u0)
    upsq = square(up[0]) + square(up[1]) + square(up[2])
    u0psq = square(u0p)
    return SymbolAlgebra(
        u0=u0, u=u, u0p=u0p, up=up, usq=usq, uup=uup, u0sq=u0sq,
        p0=u0sq - usq,
        p_vel=u0psq * usq - square(uup),
        q_vel=u0psq - upsq,
    )


# Exact case predicates, each written from its own definition.
def _u0_zero(a: SymbolAlgebra) -> bool:
    return a.u0.is_zero()


def _u_zero(a: SymbolAlgebra) -> bool:
    return a.usq.is_zero()


def _uup_zero(a: SymbolAlgebra) -> bool:
    return a.usq.is_constant()


def _u0sq_eq_usq(a: SymbolAlgebra) -> bool:
    return a.u0sq.coeff_equal(a.usq)


CASE_PREDICATES = {
    1: lambda a: _u0_zero(a) and not _u_zero(a) and _uup_zero(a),
    2: lambda a: _u0_zero(a) and not _uup_zero(a),
    3: lambda a: not _u0_zero(a) and _u_zero(a),
    4: lambda a: not _u0_zero(a) and not _u_zero(a) and _uup_zero(a),
    5: lambda a: not _u0_zero(a) and not _uup_zero(a) and not _u0sq_eq_usq(a),
    6: lambda a: not _u0_zero(a) and _u0sq_eq_usq(a),
}


def case_id(m: ModelSpec) -> int:
    a = symbol_algebra(m)
    if _u0_zero(a):
        return 1 if _uup_zero(a) else 2
    if _u_zero(a):
        return 3
    if _u0sq_eq_usq(a):
        return 6
    return 4 if _uup_zero(a) else 5


def velocity_kernel_contains_zero(a: SymbolAlgebra) -> bool:
    """Whether det(velocity symbol) vanishes on a set of positive measure.

    Off the zeros of u the determinant is -p/|u|^2; on them it is q. A
    nonzero trigonometric polynomial has finitely many zeros, and the zero
    set of u has positive measure only if u vanishes identically.
    """
    if a.usq.is_zero():
        return a.q_vel.is_zero()
    return a.p_vel.is_zero()


@dataclass(frozen=True)
class SpectralReport:
    case_id: int
    spectral_type: tuple[int, int, int]
    spectrum: list[tuple[float, float]]
    velocity_kernel_contains_zero: bool
    flux_admissible: bool


def _spectral_type(case: int) -> tuple[int, int, int]:
    if case == 1:
        return (1, 0, 0)
    if case == 6:
        return (1, 1, 0)
    return (0, 1, 0)


def classify(m: ModelSpec) -> SpectralReport:
    a = symbol_algebra(m)
    case = case_id(m)
    vk = velocity_kernel_contains_zero(a)
    return SpectralReport(
        case_id=case,
        spectral_type=_spectral_type(case),
        spectrum=spectrum(m, a),
        velocity_kernel_contains_zero=vk,
        flux_admissible=case in (2, 3, 4, 5),
    )


def _safe_zeros(p: TrigPoly) -> list[float]:
    if p.is_zero():
        return []
    return zeros(p)


def critical_points(a: SymbolAlgebra) -> np.ndarray:
    """Candidate extremal points of both bands: endpoints, zeros of u, and stationary points."""
    pts = [-math.pi, math.pi, 0.0]
    for poly in (a.usq, a.p_vel, a.u0p, a.uup):
        pts.extend(_safe_zeros(poly))
    return np.array(sorted(set(pts)))


def spectrum(m: ModelSpec, a: SymbolAlgebra | None = None) -> list[tuple[float, float]]:
    """Union of the ranges of e+ and e-, merged into disjoint closed intervals."""
    a = a or symbol_algebra(m)
    ks = critical_points(a)
    u0 = a.u0.eval(ks)
    r = np.sqrt(np.maximum(a.usq.eval(ks), 0.0))
    ranges = sorted([(float(np.min(u0 + r)), float(np.max(u0 + r))),
                     (float(np.min(u0 - r)), float(np.max(u0 - r)))])
    merged = [ranges[0]]
    for lo, hi in ranges[1:]:
        plo, phi = merged[-1]
        if lo <= phi:
            merged[-1] = (plo, max(phi, hi))
        else:
            merged.append((lo, hi))
    return merged
