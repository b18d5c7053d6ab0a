"""Band functions, asymptotic velocity and the R/L mover density symbol.

All evaluators accept a scalar angle or a numpy array of angles. Points with
|u(k)|^2 below ``Z_U_TOL`` are treated as zeros of u.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import fermi as _fermi
from .errors import InadmissibleCase
from .model import Z_U_TOL, ModelSpec, SymbolAlgebra, case_id, symbol_algebra
from .trigpoly import TrigPoly, zeros


def _unit(vec: np.ndarray, norm: np.ndarray, mask_zero: np.ndarray) -> np.ndarray:
    safe = np.where(mask_zero, 1.0, norm)
    return np.where(mask_zero, 0.0, vec / safe)


def _out(k, arr):
    return float(np.asarray(arr).reshape(-1)[0]) if np.ndim(k) == 0 else arr


def _vec_out(k, arr):
    return arr[:, 0] if np.ndim(k) == 0 else arr


@dataclass(frozen=True)
class BranchFunctions:
    u0: TrigPoly
    u0p: TrigPoly
    usq: TrigPoly
    uup: TrigPoly
    u: tuple[TrigPoly, TrigPoly, TrigPoly]
    up: tuple[TrigPoly, TrigPoly, TrigPoly]
    u_zeros: tuple[float, ...]
    u_identically_zero: bool

    @classmethod
    def from_algebra(cls, a: SymbolAlgebra) -> "BranchFunctions":
        uz = a.usq.is_zero()
        return cls(
            u0=a.u0.to_float(),
            u0p=a.u0p.to_float(),
            usq=a.usq.to_float(),
            uup=a.uup.to_float(),
            u=tuple(x.to_float() for x in a.u),
            up=tuple(x.to_float() for x in a.up),
            u_zeros=() if uz else tuple(zeros(a.usq)),
            u_identically_zero=uz,
        )

    def _usq(self, k):
        # summing squared components keeps full relative accuracy near zeros of u,
        # where the expanded polynomial |u|^2 only has absolute accuracy
        return sum(x.eval(k) ** 2 for x in self.u)

    def in_zu(self, k):
        if self.u_identically_zero:
            return np.ones(np.shape(k), dtype=bool) if np.ndim(k) else True
        return self._usq(k) < Z_U_TOL

    def abs_u(self, k):
        return np.sqrt(self._usq(k))

    def e_plus(self, k):
        return self.u0.eval(k) + self.abs_u(k)

    def e_minus(self, k):
        return self.u0.eval(k) - self.abs_u(k)

    def _de(self, k, sign: float):
        ka = np.atleast_1d(np.asarray(k, dtype=float))
        d0 = self.u0p.eval(ka)
        if self.u_identically_zero:
            return _out(k, d0)
        r = self.abs_u(ka)
        zu = self.in_zu(ka)
        uup = sum(x.eval(ka) * y.eval(ka) for x, y in zip(self.u, self.up))
        ratio = uup / np.where(zu, 1.0, r)
        out = np.where(zu, np.nan, d0 + sign * ratio)
        return _out(k, out)

    def de_plus(self, k):
        """e+' on the complement of the zeros of u; NaN on them."""
        return self._de(k, 1.0)

    def de_minus(self, k):
        return self._de(k, -1.0)

    # vectorized pieces used by several operations
    def u_vec(self, k) -> np.ndarray:
        return np.array([x.eval(np.atleast_1d(k)) for x in self.u])

    def up_vec(self, k) -> np.ndarray:
        return np.array([x.eval(np.atleast_1d(k)) for x in self.up])

    def u_tilde(self, k) -> np.ndarray:
        ka = np.atleast_1d(np.asarray(k, dtype=float))
        uv = self.u_vec(ka)
        return _unit(uv, np.sqrt((uv ** 2).sum(0)), np.atleast_1d(self.in_zu(ka)))


def eigenvalue_functions(m: ModelSpec) -> BranchFunctions:
    return BranchFunctions.from_algebra(symbol_algebra(m))


def _branches(m) -> BranchFunctions:
    return m if isinstance(m, BranchFunctions) else eigenvalue_functions(m)


def velocity(m, k):
    """(v0, v) of the momentum-space asymptotic velocity."""
    b = _branches(m)
    ka = np.atleast_1d(np.asarray(k, dtype=float))
    v0 = b.u0p.eval(ka)
    upv = b.up_vec(ka)
    ut = b.u_tilde(ka)
    zu = np.atleast_1d(b.in_zu(ka))
    proj = (ut * upv).sum(0) * ut
    v = np.where(zu, upv, proj)
    return _out(k, v0), _vec_out(k, v)


def _check_admissible(m) -> None:
    if isinstance(m, ModelSpec):
        c = case_id(m)
        if c in (1, 6):
            raise InadmissibleCase(c)


def _sign_velocity_arrays(b: BranchFunctions, ka: np.ndarray):
    zu = np.atleast_1d(b.in_zu(ka))
    # off the zeros of u
    sp = np.sign(np.nan_to_num(np.atleast_1d(b.de_plus(ka))))
    sm = np.sign(np.nan_to_num(np.atleast_1d(b.de_minus(ka))))
    ut = b.u_tilde(ka)
    # on the zeros of u
    d0 = b.u0p.eval(ka)
    upv = b.up_vec(ka)
    upn = np.sqrt((upv ** 2).sum(0))
    fp, fm = np.sign(d0 + upn), np.sign(d0 - upn)
    upt = _unit(upv, upn, upn == 0.0)
    w0 = np.where(zu, 0.5 * (fp + fm), 0.5 * (sp + sm))
    w = np.where(zu, 0.5 * (fp - fm) * upt, 0.5 * (sp - sm) * ut)
    return w0, w


def sign_velocity(m, k):
    """(w0, w): Pauli coefficients of the sign of the asymptotic velocity."""
    _check_admissible(m)
    b = _branches(m)
    ka = np.atleast_1d(np.asarray(k, dtype=float))
    w0, w = _sign_velocity_arrays(b, ka)
    return _out(k, w0), _vec_out(k, w)


def two_by_two_calculus(chi: Callable, m0, mvec):
    """chi(m0 + m.sigma) in Pauli coefficients, vectorized over columns of mvec."""
    m0 = np.asarray(m0, dtype=float)
    mvec = np.asarray(mvec, dtype=float)
    r = np.sqrt((mvec ** 2).sum(0))
    cp, cm = np.asarray(chi(m0 + r), dtype=float), np.asarray(chi(m0 - r), dtype=float)
    mt = _unit(mvec, r, r == 0.0)
    return 0.5 * (cp + cm), 0.5 * (cp - cm) * mt


def functional_calculus(u0: TrigPoly, u: tuple[TrigPoly, TrigPoly, TrigPoly], chi: Callable):
    """Evaluator k -> (v0(k), v(k)) for chi applied to the symbol u0 + u.sigma."""

    def evaluate(k):
        ka = np.atleast_1d(np.asarray(k, dtype=float))
        u0v = u0.eval(ka)
        uv = np.array([x.eval(ka) for x in u])
        usq = (uv ** 2).sum(0)
        r = np.sqrt(usq)
        zu = usq < Z_U_TOL
        cp, cm = np.asarray(chi(u0v + r), dtype=float), np.asarray(chi(u0v - r), dtype=float)
        ut = _unit(uv, r, zu)
        v0, v = 0.5 * (cp + cm), 0.5 * (cp - cm) * ut
        return _out(k, v0), _vec_out(k, v)

    return evaluate


@dataclass(frozen=True)
class DensitySymbol:
    a0: float | np.ndarray
    a: np.ndarray


def rl_density_arrays(b: BranchFunctions, m: ModelSpec, ka: np.ndarray):
    beta, delta = _fermi.beta_delta(m.beta_L, m.beta_R)
    rho = m.fermi
    zu = np.atleast_1d(b.in_zu(ka))
    ep, em = b.e_plus(ka), b.e_minus(ka)
    sp = np.sign(np.nan_to_num(np.atleast_1d(b.de_plus(ka))))
    sm = np.sign(np.nan_to_num(np.atleast_1d(b.de_minus(ka))))
    rp = _fermi.eval(rho, (beta + delta * sp) * ep)
    rm = _fermi.eval(rho, (beta + delta * sm) * em)
    ut = b.u_tilde(ka)
    a0 = 0.5 * (rp + rm)
    a = 0.5 * (rp - rm) * ut
    if np.any(zu):
        # u vanishes here, so the generator reduces to u0 (beta + delta (w0 + w.sigma))
        w0, w = _sign_velocity_arrays(b, ka[zu])
        u0 = b.u0.eval(ka[zu])
        z0, z = two_by_two_calculus(lambda x: _fermi.eval(rho, x), u0 * (beta + delta * w0), u0 * delta * w)
        a0 = a0.copy()
        a = a.copy()
        a0[zu] = z0
        a[:, zu] = z
    return a0, a


def rl_density(m: ModelSpec, k) -> DensitySymbol:
    """Pauli coefficients (a0, a) of the R/L mover 2-point symbol at k."""
    _check_admissible(m)
    b = eigenvalue_functions(m)
    ka = np.atleast_1d(np.asarray(k, dtype=float))
    a0, a = rl_density_arrays(b, m, ka)
    return DensitySymbol(_out(k, a0), _vec_out(k, a))
