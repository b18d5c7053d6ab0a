"""Analytic heat flux of the R/L mover steady state, its special forms and cross-checks."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import fermi as _fermi
from .errors import InadmissibleCase, IsingPoint, NotGaugeInvariant
from .model import ModelSpec, SymbolAlgebra, case_id, spectrum, symbol_algebra
from .quadrature import QuadResult, integrate, integrate_panels
from .spectral import BranchFunctions
from .trigpoly import zeros

PI = math.pi
DEFAULT_QUAD_TOL = 1e-10
# 1/2 from the formula times the normalized measure dk/(2 pi)
_PREFACTOR = 0.5 / (2.0 * PI)


@dataclass(frozen=True)
class FluxReport:
    J: float
    sigma: float
    quad_error: float
    case_id: int
    subinterval_count: int
    closed_form_J: float | None = None
    panels: tuple = ()


def _require_admissible(case: int) -> None:
    if case in (1, 6):
        raise InadmissibleCase(case)


def kink_points(a: SymbolAlgebra) -> list[float]:
    """Where |u|, e or e' may fail to be smooth: zeros of u^2, u0^2-u^2, the velocity polynomial, u0, u0', uu'."""
    pts: set[float] = {-PI, 0.0, PI}
    for poly in (a.usq, a.p0, a.p_vel, a.u0, a.u0p, a.uup):
        if not poly.is_zero():
            pts.update(zeros(poly))
    return sorted(pts)


def _upper_band(b: BranchFunctions):
    """(e, e') of the upper band; on the zeros of u, e' falls back to u0'."""

    def e_and_de(k):
        e = b.e_plus(k)
        de = b.de_plus(k)
        de = np.where(np.isnan(de), b.u0p.eval(k), de)
        return e, de

    return e_and_de


def xy_parameters(m: ModelSpec) -> tuple[float, float] | None:
    """(gamma, h) if the model is an XY chain with unit hopping, else None."""
    if m.nu != 1 or m.fermi.kind != _fermi.FERMI_DIRAC:
        return None
    if m.c0[0] != 0 or m.c1[0] != 0 or m.c3[0] != Fraction(1, 2):
        return None
    return float(m.c2[0]), float(m.c3_0)


def heat_flux(m: ModelSpec, quad_tol: float = DEFAULT_QUAD_TOL) -> FluxReport:
    """J = 1/2 int dk/2pi e |e'| Delta(e) on the upper band e = u0 + |u|."""
    case = case_id(m)
    _require_admissible(case)
    a = symbol_algebra(m)
    b = BranchFunctions.from_algebra(a)
    band = _upper_band(b)

    def integrand(k):
        e, de = band(k)
        return _PREFACTOR * e * np.abs(de) * _fermi.delta_kernel(m.fermi, m.beta_L, m.beta_R, e)

    res = integrate(integrand, -PI, PI, kink_points(a), quad_tol)
    closed = None
    xy = xy_parameters(m)
    if xy is not None and not _is_ising(*xy):
        closed = heat_flux_xy(xy[0], xy[1], m.beta_L, m.beta_R, quad_tol)
    return _report(m, case, res, closed)


def _report(m: ModelSpec, case: int, res: QuadResult, closed: float | None) -> FluxReport:
    return FluxReport(
        J=float(res.value),
        sigma=(m.beta_R - m.beta_L) * float(res.value),
        quad_error=float(res.error),
        case_id=case,
        subinterval_count=res.subintervals,
        closed_form_J=closed,
        panels=tuple(res.panels),
    )


def heat_flux_gauge(m: ModelSpec, quad_tol: float = DEFAULT_QUAD_TOL) -> FluxReport:
    """J = 1/2 int dk/2pi |uu'| Delta(|u|), valid for gauge-invariant models (u0 = 0)."""
    a = symbol_algebra(m)
    if not a.u0.is_zero():
        raise NotGaugeInvariant("u0 is not identically zero")
    case = case_id(m)
    _require_admissible(case)
    b = BranchFunctions.from_algebra(a)

    def integrand(k):
        uup = sum(x.eval(k) * y.eval(k) for x, y in zip(b.u, b.up))
        return _PREFACTOR * np.abs(uup) * _fermi.delta_kernel(m.fermi, m.beta_L, m.beta_R, b.abs_u(k))

    pts = [-PI, 0.0, PI, *zeros(a.usq), *zeros(a.uup)]
    res = integrate(integrand, -PI, PI, pts, quad_tol)
    return _report(m, case, res, None)


def _is_ising(gamma: float, h: float) -> bool:
    return abs(gamma) == 0.5 and h == 0.0


def _fd_kernel_stable(x: np.ndarray, beta: float, delta: float) -> np.ndarray:
    a, bb = delta * x, np.abs(beta * x)
    with np.errstate(over="ignore", invalid="ignore"):
        direct = np.sinh(a) / (np.cosh(a) + np.cosh(bb))
        scaled = (np.exp(a - bb) - np.exp(-a - bb)) / (np.exp(a - bb) + np.exp(-a - bb) + 1.0 + np.exp(-2.0 * bb))
    return np.where(bb >= np.abs(a), scaled, direct)


def _xy_breaks(gamma: float, h: float) -> list[float]:
    # uu' = sin k ((4 gamma^2 - 1) cos k - h); |u| = 0 needs sin k = 0 or gamma = 0
    pts = [-PI, 0.0, PI]
    g4 = 4.0 * gamma * gamma - 1.0
    if g4 != 0.0 and abs(h / g4) <= 1.0:
        c = math.acos(h / g4)
        pts += [c, -c]
    if gamma == 0.0 and abs(h) <= 1.0:
        c = math.acos(-h)
        pts += [c, -c]
    return pts


def heat_flux_xy(gamma: float, h: float, beta_L: float, beta_R: float, quad_tol: float = DEFAULT_QUAD_TOL) -> float:
    """Closed-form Fermi-Dirac XY flux with u2 = -2 gamma sin k, u3 = h + cos k."""
    if _is_ising(gamma, h):
        raise IsingPoint(f"(gamma, h) = ({gamma}, {h}) has flat bands")
    beta, delta = _fermi.beta_delta(beta_L, beta_R)

    def integrand(k):
        s, c = np.sin(k), np.cos(k)
        r = np.sqrt(4.0 * gamma * gamma * s * s + (h + c) ** 2)
        uup = s * ((4.0 * gamma * gamma - 1.0) * c - h)
        return _PREFACTOR * np.abs(uup) * _fd_kernel_stable(r, beta, delta)

    return integrate(integrand, -PI, PI, _xy_breaks(gamma, h), quad_tol).value


def h_norm(m: ModelSpec) -> float:
    """Operator norm of H: the largest |endpoint| of the spectrum."""
    return max(max(abs(lo), abs(hi)) for lo, hi in spectrum(m))


def fermi_dirac_c_min(m: ModelSpec) -> float:
    """Lower bound of rho' for Fermi-Dirac on the range of arguments the flux can see."""
    return _fermi.fermi_dirac_min_derivative(max(abs(m.beta_L), abs(m.beta_R)), h_norm(m))


def entropy_lower_bound(m: ModelSpec, c_min: float, quad_tol: float = DEFAULT_QUAD_TOL) -> float:
    """2 c delta^2 int dk/2pi e^2 |e'|."""
    case = case_id(m)
    _require_admissible(case)
    _, delta = _fermi.beta_delta(m.beta_L, m.beta_R)
    if delta == 0.0:
        return 0.0
    a = symbol_algebra(m)
    band = _upper_band(BranchFunctions.from_algebra(a))

    def integrand(k):
        e, de = band(k)
        return e * e * np.abs(de) / (2.0 * PI)

    res = integrate(integrand, -PI, PI, kink_points(a), quad_tol)
    return 2.0 * c_min * delta * delta * res.value


def refined_value(m: ModelSpec, report: FluxReport) -> float:
    """Re-evaluate heat_flux with every accepted subinterval halved once more."""
    a = symbol_algebra(m)
    band = _upper_band(BranchFunctions.from_algebra(a))

    def integrand(k):
        e, de = band(k)
        return _PREFACTOR * e * np.abs(de) * _fermi.delta_kernel(m.fermi, m.beta_L, m.beta_R, e)

    return integrate_panels(integrand, report.panels)


# -- expansion-identity cross-check ------------------------------------------------

def _mu_terms(m: ModelSpec, k: np.ndarray) -> list[np.ndarray]:
    """The eight expansion functions, transcribed term by term from their coefficient sums."""
    nu = m.nu

    def C(alpha: int, n: int) -> float:
        return float(m.coeff(alpha, n))

    def S(n):
        return np.sin(n * k)

    def Co(n):
        return np.cos(n * k)

    N = range(1, nu + 1)
    zero = np.zeros_like(k)
    mu = [zero.copy() for _ in range(9)]
    for n in N:
        for l in range(0, nu - n + 1):
            mu[1] += n * S(n) * sum(C(a, l) * C(a, n + l) for a in range(4))
    for n in N:
        for mm in N:
            mu[2] -= n * S(n + mm) * (C(0, n) * C(0, mm) + C(1, n) * C(1, mm) + C(2, n) * C(2, mm) - C(3, n) * C(3, mm))
    for n in N:
        for mm in N:
            for l in range(0, nu - n + 1):
                mu[3] -= 2 * n * S(n) * S(mm) * C(1, mm) * (
                    C(0, l) * C(1, n + l) + C(0, n + l) * C(1, l) - C(2, l) * C(3, n + l) - C(2, n + l) * C(3, l))
                mu[5] -= 2 * n * S(n) * S(mm) * C(2, mm) * (
                    C(0, l) * C(2, n + l) + C(0, n + l) * C(2, l) + C(1, l) * C(3, n + l) + C(1, n + l) * C(3, l))
            for l in N:
                mu[4] += 2 * n * S(n + l) * S(mm) * C(1, mm) * (
                    C(0, n) * C(1, l) + C(0, l) * C(1, n) + C(2, n) * C(3, l) - C(2, l) * C(3, n))
                mu[6] += 2 * n * S(n + l) * S(mm) * C(2, mm) * (
                    C(0, n) * C(2, l) + C(0, l) * C(2, n) - C(1, n) * C(3, l) + C(1, l) * C(3, n))

    def odd_bracket(n, l):
        return C(0, l) * C(3, n + l) - C(0, n + l) * C(3, l) + C(1, l) * C(2, n + l) - C(1, n + l) * C(2, l)

    def even_bracket(n, l):
        return C(0, n) * C(3, l) + C(0, l) * C(3, n) - C(1, n) * C(2, l) + C(1, l) * C(2, n)

    c30 = C(3, 0)
    for n in N:
        for l in range(0, nu - n + 1):
            mu[7] -= n * Co(n) * c30 * odd_bracket(n, l)
            for mm in N:
                mu[7] -= 2 * n * Co(n) * Co(mm) * C(3, mm) * odd_bracket(n, l)
        for mm in N:
            mu[8] += n * Co(n + mm) * c30 * even_bracket(n, mm)
            for l in N:
                mu[8] += 2 * n * Co(n + l) * Co(mm) * C(3, mm) * even_bracket(n, l)
    return mu


def mu_identity_check(m: ModelSpec, grid_n: int = 256) -> tuple[float, float]:
    """Max residuals of mu1+mu2 = -(u0u0' + uu')/2 and sum_{3..8} mu = -(u0 uu' + u0'|u|^2)/2."""
    k = -PI + 2.0 * PI * np.arange(grid_n) / grid_n
    mu = _mu_terms(m, k)
    a = symbol_algebra(m)
    u0, u0p = a.u0.eval(k), a.u0p.eval(k)
    uup, usq = a.uup.eval(k), a.usq.eval(k)
    r1 = mu[1] + mu[2] + 0.5 * (u0 * u0p + uup)
    r2 = sum(mu[3:9]) + 0.5 * (u0 * uup + u0p * usq)
    return float(np.max(np.abs(r1))), float(np.max(np.abs(r2)))


# -- sweeps ----------------------------------------------------------------------

@dataclass(frozen=True)
class SweepRow:
    index: int
    beta_L: float
    beta_R: float
    report: FluxReport | None
    error: str | None = None


def flux_sweep(
    m_base: ModelSpec,
    beta_pairs: Iterable[tuple[float, float]] | None = None,
    models: Sequence[ModelSpec] | None = None,
    quad_tol: float = DEFAULT_QUAD_TOL,
) -> list[SweepRow]:
    """Flux over a grid of (beta_L, beta_R) or over a list of coefficient variants.

    Inadmissible points are reported per row rather than raised.
    """
    if models is None:
        pairs = list(beta_pairs or [(m_base.beta_L, m_base.beta_R)])
        models = [m_base.with_betas(bl, br) for bl, br in pairs]
    rows = []
    for i, mm in enumerate(models):
        try:
            rows.append(SweepRow(i, mm.beta_L, mm.beta_R, heat_flux(mm, quad_tol)))
        except InadmissibleCase as exc:
            rows.append(SweepRow(i, mm.beta_L, mm.beta_R, None, str(exc)))
    return rows
