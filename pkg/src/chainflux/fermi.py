"""Fermi functions rho with rho(x) + rho(-x) = 1, and the temperature-difference kernel."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import CustomOutOfRange

FERMI_DIRAC = "fermi-dirac"
GROUND = "ground"
CUSTOM = "custom"


@dataclass(frozen=True)
class FermiSpec:
    kind: str = FERMI_DIRAC
    odd_part: Callable | None = None
    # Set for the built-in tanh family so configs round-trip through JSON.
    scale: float | None = None

    @classmethod
    def fermi_dirac(cls) -> "FermiSpec":
        return cls(FERMI_DIRAC)

    @classmethod
    def ground(cls) -> "FermiSpec":
        return cls(GROUND)

    @classmethod
    def custom(cls, odd_part: Callable) -> "FermiSpec":
        return cls(CUSTOM, odd_part=odd_part)

    @classmethod
    def tanh_scale(cls, scale: float) -> "FermiSpec":
        if not scale > 0:
            raise ValueError("tanh-scale needs scale > 0")
        return cls(CUSTOM, odd_part=lambda x, s=float(scale): np.tanh(np.asarray(x) / s), scale=float(scale))

    def __post_init__(self):
        if self.kind not in (FERMI_DIRAC, GROUND, CUSTOM):
            raise ValueError(f"unknown Fermi function kind {self.kind!r}")
        if self.kind == CUSTOM and self.odd_part is None:
            raise ValueError("custom Fermi function needs an odd part")

    @property
    def strictly_monotone(self) -> bool:
        """Ground state is a step, so positivity claims are not made for it."""
        return self.kind != GROUND

    def __call__(self, x):
        return eval(self, x)

    @classmethod
    def from_json(cls, obj) -> "FermiSpec":
        if obj in (None, FERMI_DIRAC):
            return cls.fermi_dirac()
        if obj == GROUND:
            return cls.ground()
        if isinstance(obj, dict) and set(obj) == {"custom"}:
            spec = obj["custom"]
            if isinstance(spec, dict) and spec.get("type") == "tanh-scale":
                return cls.tanh_scale(float(spec["scale"]))
        raise ValueError(f"unrecognized fermi entry {obj!r}")

    def to_json(self):
        if self.kind == CUSTOM:
            if self.scale is None:
                raise ValueError("arbitrary custom Fermi functions cannot be serialized")
            return {"custom": {"type": "tanh-scale", "scale": self.scale}}
        return self.kind


def eval(f: FermiSpec, x):  # noqa: A001 - mirrors the operation name
    """rho(x) for scalar or array x."""
    xa = np.asarray(x, dtype=float)
    if f.kind == FERMI_DIRAC:
        # 1/(1+e^{-x}) on each half-line so that neither tail loses relative precision
        z = np.exp(-np.abs(xa))
        out = np.where(xa >= 0, 1.0 / (1.0 + z), z / (1.0 + z))
    elif f.kind == GROUND:
        out = np.where(xa > 0, 1.0, np.where(xa < 0, 0.0, 0.5))
    else:
        mu = np.asarray(f.odd_part(xa), dtype=float)
        if np.any(np.abs(mu) > 1.0):
            raise CustomOutOfRange("custom odd part exceeds 1 in absolute value")
        out = 0.5 * (1.0 + mu)
    if np.ndim(x) == 0:
        return float(out)
    return out


def beta_delta(beta_L: float, beta_R: float) -> tuple[float, float]:
    """Mean inverse temperature and half-difference."""
    return 0.5 * (beta_R + beta_L), 0.5 * (beta_R - beta_L)


def delta_kernel(f: FermiSpec, beta_L: float, beta_R: float, x):
    """rho(beta_R x) - rho(beta_L x)."""
    xa = np.asarray(x, dtype=float)
    return eval(f, beta_R * xa) - eval(f, beta_L * xa)


def fermi_dirac_delta_closed(x, beta: float, delta: float):
    """Closed form of the Fermi-Dirac kernel: sinh(dx)/(cosh(dx)+cosh(bx))."""
    xa = np.asarray(x, dtype=float)
    return np.sinh(delta * xa) / (np.cosh(delta * xa) + np.cosh(beta * xa))


def fermi_dirac_min_derivative(beta_max: float, h_norm: float) -> float:
    """min of rho' = rho(1-rho) over [-beta_max*|H|, beta_max*|H|], attained at the endpoints."""
    x = abs(beta_max) * h_norm
    return 0.25 / math.cosh(0.5 * x) ** 2
