"""Finite-lattice brute-force realization of the partitioned quench.

Sites run over -N..N. One-particle operators live on the doubled space
C^(2N+1) + C^(2N+1) and are stored as dense complex matrices with the Pauli
blocks [[h0+h3, h1-i h2], [h1+i h2, h0-h3]].
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import fermi as _fermi
from . import kernels
from .errors import ConfigTooSmall, EigenNotConverged, NonCommuting, WindowTooShort
from .fermi import FermiSpec
from .model import ModelSpec, position_symbol
from .spectral import eigenvalue_functions

LEFT, SAMPLE, RIGHT = 0, 1, 2
COMMUTATOR_TOL = 1e-12
MIN_SAMPLES = 200


@dataclass(frozen=True)
class LatticeConfig:
    N: int
    x_L: int = 0
    x_R: int = 0
    beta_L: float = 1.0
    beta_S: float = 1.0
    beta_R: float = 1.0
    fermi: FermiSpec = field(default_factory=FermiSpec.fermi_dirac)
    t_max: float | None = None
    t_samples: int = MIN_SAMPLES

    def __post_init__(self):
        if self.x_L > self.x_R:
            raise ValueError("x_L must not exceed x_R")

    @classmethod
    def for_model(cls, m: ModelSpec, N: int, x_L: int = 0, x_R: int = 0,
                  t_max: float | None = None, t_samples: int = MIN_SAMPLES) -> "LatticeConfig":
        return cls(N=N, x_L=x_L, x_R=x_R, beta_L=m.beta_L, beta_S=m.beta_sample, beta_R=m.beta_R,
                   fermi=m.fermi, t_max=t_max, t_samples=t_samples)

    @property
    def n_sites(self) -> int:
        return 2 * self.N + 1

    def sites(self) -> np.ndarray:
        return np.arange(-self.N, self.N + 1)

    def regions(self) -> np.ndarray:
        """Region label per doubled-space index."""
        x = self.sites()
        lab = np.where(x < self.x_L, LEFT, np.where(x > self.x_R, RIGHT, SAMPLE))
        return np.concatenate([lab, lab])


@dataclass(frozen=True)
class LatticeOperator:
    matrix: np.ndarray
    N: int

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def blocks(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        n = 2 * self.N + 1
        M = self.matrix
        return M[:n, :n], M[:n, n:], M[n:, :n], M[n:, n:]

    def pauli_blocks(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """(h0, h1, h2, h3) with M = sum h_a sigma_a."""
        a, b, c, d = self.blocks()
        return 0.5 * (a + d), 0.5 * (b + c), 0.5j * (b - c), 0.5 * (a - d)


def gamma(M: np.ndarray) -> np.ndarray:
    """Conjugation applied to a matrix: sigma1 conj(M) sigma1."""
    n = M.shape[0] // 2
    Mc = np.conj(M)
    out = np.empty_like(Mc)
    out[:n, :n], out[:n, n:] = Mc[n:, n:], Mc[n:, :n]
    out[n:, :n], out[n:, n:] = Mc[:n, n:], Mc[:n, :n]
    return out


def gamma_vector(F: np.ndarray) -> np.ndarray:
    """(f1 + f2) -> (conj f2 + conj f1)."""
    n = F.shape[0] // 2
    return np.concatenate([np.conj(F[n:]), np.conj(F[:n])])


def two_point_value(T: np.ndarray, F: np.ndarray, G: np.ndarray) -> complex:
    """omega(B(F) B(G)) = (Gamma F, T G) for the quasifree state with 2-point operator T."""
    return complex(np.vdot(gamma_vector(F), T @ G))


def check_size(m: ModelSpec, cfg: LatticeConfig) -> None:
    need = abs(cfg.x_L) + abs(cfg.x_R) + 2 * m.nu
    if cfg.N < need:
        raise ConfigTooSmall(f"N={cfg.N} below |x_L|+|x_R|+2nu={need}")


def build_hamiltonian(m: ModelSpec, cfg: LatticeConfig) -> LatticeOperator:
    """Truncated doubled Hamiltonian with banded Toeplitz Pauli blocks."""
    check_size(m, cfg)
    n = cfg.n_sites
    kern = position_symbol(m)
    h = [np.zeros((n, n), dtype=np.complex128) for _ in range(4)]
    idx = np.arange(n)
    for x, vals in kern.items():
        rows = idx[max(0, x): n + min(0, x)]
        cols = rows - x
        for alpha in range(4):
            if vals[alpha] != 0:
                h[alpha][rows, cols] = vals[alpha]
    h0, h1, h2, h3 = h
    H = np.block([[h0 + h3, h1 - 1j * h2], [h1 + 1j * h2, h0 - h3]])
    return LatticeOperator(H, cfg.N)


def build_decoupled(m: ModelSpec, cfg: LatticeConfig, H: LatticeOperator | None = None):
    """(H0, Delta0): H with cross-region couplings removed, and the region-wise inverse temperature."""
    H = H or build_hamiltonian(m, cfg)
    lab = cfg.regions()
    same = lab[:, None] == lab[None, :]
    H0 = np.where(same, H.matrix, 0.0)
    betas = np.array([cfg.beta_L, cfg.beta_S, cfg.beta_R])
    D0 = np.diag(betas[lab]).astype(np.complex128)
    return LatticeOperator(H0, cfg.N), LatticeOperator(D0, cfg.N)


def eigh(M: np.ndarray, tol: float = 1e-12) -> tuple[np.ndarray, np.ndarray]:
    w, V, _, off = kernels.jacobi_eigh(M, tol)
    if off > tol * max(np.linalg.norm(M), 1e-300):
        raise EigenNotConverged(f"Jacobi stopped with off-diagonal norm {off:.3g}")
    return w, V


def _block_eigh(M: np.ndarray, labels: np.ndarray | None) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition, done blockwise when M is known to preserve the label classes."""
    if labels is None:
        return eigh(M)
    n = M.shape[0]
    w = np.empty(n)
    V = np.zeros((n, n), dtype=np.complex128)
    for lab in np.unique(labels):
        sel = np.flatnonzero(labels == lab)
        wl, Vl = eigh(M[np.ix_(sel, sel)])
        w[sel] = wl
        V[np.ix_(sel, sel)] = Vl
    return w, V


def initial_two_point(H0: LatticeOperator, Delta0: LatticeOperator, fermi: FermiSpec,
                      labels: np.ndarray | None = None) -> LatticeOperator:
    """T0 = rho(Delta0 H0) through a Hermitian eigen-decomposition.

    ``labels`` may name invariant coordinate classes (the regions) so the
    decomposition runs block by block; the result is the same operator.
    """
    A, D = H0.matrix, Delta0.matrix
    comm = D @ A - A @ D
    if np.max(np.abs(comm), initial=0.0) > COMMUTATOR_TOL:
        raise NonCommuting(f"[Delta0, H0] has entries up to {np.max(np.abs(comm)):.3g}")
    X = D @ A
    X = 0.5 * (X + X.conj().T)
    if labels is not None:
        off = labels[:, None] != labels[None, :]
        if np.any(X[off] != 0):
            labels = None
    w, V = _block_eigh(X, labels)
    T = (V * _fermi.eval(fermi, w)) @ V.conj().T
    T = 0.5 * (T + T.conj().T)
    return LatticeOperator(T, H0.N)


def flux_observable(H: LatticeOperator, cfg: LatticeConfig, side: str = "L") -> LatticeOperator:
    """-Im(H_k H_kS) for the reservoir k on the given side; Im(A) = (A - A*)/2i."""
    lab = cfg.regions()
    res = LEFT if side.upper() == "L" else RIGHT
    q_res = (lab == res).astype(float)
    q_s = (lab == SAMPLE).astype(float)
    M = H.matrix
    H_res = q_res[:, None] * M * q_res[None, :]
    H_rs = q_res[:, None] * M * q_s[None, :]
    A = H_res @ H_rs
    Phi = -(A - A.conj().T) / 2j
    return LatticeOperator(Phi, H.N)


class Propagator:
    """Cached eigen-decomposition of H for Heisenberg-picture expectations."""

    def __init__(self, H: LatticeOperator):
        self.N = H.N
        self.energies, self.vectors = eigh(H.matrix)

    def to_eigenbasis(self, M: np.ndarray) -> np.ndarray:
        return self.vectors.conj().T @ M @ self.vectors

    def evolve(self, M: np.ndarray, t: float) -> np.ndarray:
        """e^{itH} M e^{-itH}."""
        ph = np.exp(1j * t * self.energies)
        Mt = self.to_eigenbasis(M) * ph[:, None] * np.conj(ph)[None, :]
        return self.vectors @ Mt @ self.vectors.conj().T

    def unitary(self, t: float) -> np.ndarray:
        """e^{itH}."""
        return (self.vectors * np.exp(1j * t * self.energies)) @ self.vectors.conj().T

    def flux_series(self, T0: np.ndarray, Phi: np.ndarray, times: np.ndarray) -> np.ndarray:
        """-tr(T0 e^{itH} Phi e^{-itH}) for each t, as complex values."""
        Tt = self.to_eigenbasis(T0)
        Pt = self.to_eigenbasis(Phi)
        M = Tt.T * Pt
        out = np.empty(len(times), dtype=np.complex128)
        for i, t in enumerate(times):
            x = np.exp(1j * t * self.energies)
            out[i] = -(x @ M @ np.conj(x))
        return out


def evolved_two_point(prop: Propagator, T0: np.ndarray, t: float) -> np.ndarray:
    """2-point operator of the state at time t: e^{-itH} T0 e^{itH}."""
    return prop.evolve(T0, -t)


def instantaneous_flux(T0: LatticeOperator, H, Phi: LatticeOperator, t: float) -> float:
    """-tr(T0 e^{itH} Phi e^{-itH}); H may be a LatticeOperator or a Propagator."""
    prop = H if isinstance(H, Propagator) else Propagator(H)
    val = prop.flux_series(T0.matrix, Phi.matrix, np.array([t]))[0]
    scale = max(1.0, float(np.abs(Phi.matrix).sum()))
    if abs(val.imag) > 1e-10 * scale:
        raise ArithmeticError(f"flux expectation has imaginary part {val.imag:.3g}")
    return float(val.real)


def max_group_velocity(m: ModelSpec, grid: int = 4096) -> float:
    b = eigenvalue_functions(m)
    k = -math.pi + 2.0 * math.pi * np.arange(grid) / grid
    vals = [np.abs(b.de_plus(k)), np.abs(b.de_minus(k)), np.abs(b.u0p.eval(k))]
    return float(max(np.nanmax(v) for v in vals))


def transit_guard(m: ModelSpec, cfg: LatticeConfig, v_max: float | None = None) -> float:
    """Largest t_max before disturbances from the junctions reach the truncation edges."""
    v = v_max if v_max is not None else max_group_velocity(m)
    return 0.8 * (cfg.N - max(abs(cfg.x_L), abs(cfg.x_R)) - m.nu) / v


@dataclass(frozen=True)
class NessResult:
    J_avg: float
    J_std: float
    J_R_avg: float
    J_R_std: float
    t_max: float
    times: np.ndarray
    J_series: np.ndarray
    J_R_series: np.ndarray

    def __iter__(self):
        return iter((self.J_avg, self.J_std, self.J_R_avg))


def ness_flux(m: ModelSpec, cfg: LatticeConfig) -> NessResult:
    """Plateau average of the left and right reservoir fluxes over [0.2 t_max, t_max]."""
    v_max = max_group_velocity(m)
    guard = transit_guard(m, cfg, v_max)
    t_max = guard if cfg.t_max is None else cfg.t_max
    if t_max > guard * (1 + 1e-12):
        raise ConfigTooSmall(f"t_max={t_max:.4g} exceeds the transit guard {guard:.4g} for N={cfg.N}")
    if t_max < 5.0 / v_max:
        raise WindowTooShort(f"t_max={t_max:.4g} below 5/v_max={5.0 / v_max:.4g}")
    samples = max(cfg.t_samples, MIN_SAMPLES)
    H = build_hamiltonian(m, cfg)
    H0, D0 = build_decoupled(m, cfg, H)
    T0 = initial_two_point(H0, D0, cfg.fermi, labels=cfg.regions())
    prop = Propagator(H)
    times = np.linspace(0.2 * t_max, t_max, samples)
    JL = prop.flux_series(T0.matrix, flux_observable(H, cfg, "L").matrix, times).real
    JR = prop.flux_series(T0.matrix, flux_observable(H, cfg, "R").matrix, times).real
    return NessResult(
        J_avg=float(JL.mean()), J_std=float(JL.std()),
        J_R_avg=float(JR.mean()), J_R_std=float(JR.std()),
        t_max=float(t_max), times=times, J_series=JL, J_R_series=JR,
    )


def compare_with_analytic(m: ModelSpec, cfg: LatticeConfig, analytic_J: float) -> dict:
    res = ness_flux(m, cfg)
    rel = abs(res.J_avg - analytic_J) / abs(analytic_J) if analytic_J != 0 else float("inf")
    return {"J_avg": res.J_avg, "J_std": res.J_std, "J_R_avg": res.J_R_avg,
            "analytic_J": analytic_J, "rel_dev": rel}


def wavepacket_velocity(m: ModelSpec, k0: float, band: int = 1, N: int = 60,
                        width: float = 6.0, t_end: float = 20.0, steps: int = 5) -> float:
    """Slope of the mean position of a band-resolved Gaussian packet under e^{itH}."""
    from .model import pauli_symbol

    cfg = LatticeConfig(N=N)
    H = build_hamiltonian(m, cfg)
    prop = Propagator(H)
    u0, u1, u2, u3 = (float(p.eval(k0)) for p in pauli_symbol(m))
    sym = np.array([[u0 + u3, u1 - 1j * u2], [u1 + 1j * u2, u0 - u3]])
    w, vec = np.linalg.eigh(sym)
    spinor = vec[:, -1] if band > 0 else vec[:, 0]
    x = cfg.sites().astype(float)
    env = np.exp(-x ** 2 / (4.0 * width ** 2)) * np.exp(-1j * k0 * x)
    F = np.concatenate([spinor[0] * env, spinor[1] * env])
    F /= np.linalg.norm(F)
    pos = np.concatenate([x, x])
    times = np.linspace(0.0, t_end, steps)
    means = []
    for t in times:
        Ft = prop.unitary(t) @ F
        means.append(float(np.sum(pos * np.abs(Ft) ** 2)))
    slope = np.polyfit(times, means, 1)[0]
    return float(slope)
