"""Fast invariant suite run by the ``check`` command on the shipped fixtures."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import config, flux, model, oracle, spectral
from .pfaffian import SkewMatrix, pfaffian

EXPECTED_CASES = {"xy": 2, "suzuki2": 2, "fullrange1": 5, "ising": 1, "case6": 6}


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _admissible():
    return [(n, config.fixture(n)) for n in config.FIXTURES if model.classify(config.fixture(n)).flux_admissible]


def _symbol_consistency(rng):
    worst = 0.0
    k = -math.pi + 2 * math.pi * np.arange(64) / 64
    for name in config.FIXTURES:
        m = config.fixture(name)
        syms = model.pauli_symbol(m)
        kern = model.position_symbol(m)
        for alpha in range(4):
            direct = sum(v[alpha] * np.exp(1j * x * k) for x, v in kern.items())
            worst = max(worst, float(np.max(np.abs(direct - syms[alpha].eval(k)))))
    return worst <= 1e-12, f"max deviation {worst:.2e}"


def _cases(rng):
    got = {n: model.case_id(config.fixture(n)) for n in config.FIXTURES}
    return got == EXPECTED_CASES, " ".join(f"{n}={c}" for n, c in got.items())


def _xy_paths(rng):
    m = config.fixture("xy")
    j = flux.heat_flux(m).J
    jg = flux.heat_flux_gauge(m).J
    jx = flux.heat_flux_xy(0.3, 0.5, m.beta_L, m.beta_R)
    dev = max(abs(j - jg), abs(j - jx))
    return dev <= 1e-10, f"max path difference {dev:.2e}"


def _antisymmetry(rng):
    worst = 0.0
    for _, m in _admissible():
        a = flux.heat_flux(m)
        b = flux.heat_flux(m.with_betas(m.beta_R, m.beta_L))
        worst = max(worst, abs(a.J + b.J), abs(a.sigma - b.sigma))
    return worst <= 1e-12, f"max |J + J_swapped|, |sigma - sigma_swapped| = {worst:.2e}"


def _positivity(rng):
    vals = {n: flux.heat_flux(m).J for n, m in _admissible()}
    return all(v > 0 for v in vals.values()), " ".join(f"{n}={v:.6g}" for n, v in vals.items())


def _mu(rng):
    worst = max(max(flux.mu_identity_check(config.fixture(n))) for n in config.FIXTURES)
    return worst <= 1e-11, f"max residual {worst:.2e}"


def _density(rng):
    k = -math.pi + 2 * math.pi * np.arange(128) / 128
    worst = 0.0
    for _, m in _admissible():
        plus = spectral.rl_density(m, k).a0
        minus = spectral.rl_density(m, -k).a0
        worst = max(worst, float(np.max(np.abs(plus + minus - 1.0))))
    return worst <= 1e-12, f"max |a0(k)+a0(-k)-1| = {worst:.2e}"


def _quadrature(rng):
    bad = []
    for n, m in _admissible():
        rep = flux.heat_flux(m)
        change = abs(flux.refined_value(m, rep) - rep.J)
        if change > rep.quad_error:
            bad.append(f"{n}:{change:.1e}>{rep.quad_error:.1e}")
    return not bad, "refinement within reported error" if not bad else " ".join(bad)


def _pfaffian(rng):
    worst = 0.0
    for _ in range(50):
        n = 2 * int(rng.integers(1, 6))
        a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        s = SkewMatrix(a)
        pf = pfaffian(s)
        det = np.linalg.det(s.entries)
        worst = max(worst, abs(pf * pf - det) / max(abs(det), 1e-300))
    return worst <= 1e-9, f"max relative |pf^2 - det| = {worst:.2e}"


def _two_point(rng):
    m = config.fixture("xy")
    cfg = oracle.LatticeConfig.for_model(m, N=12, x_L=-1, x_R=1)
    H = oracle.build_hamiltonian(m, cfg)
    H0, D0 = oracle.build_decoupled(m, cfg, H)
    T = oracle.initial_two_point(H0, D0, cfg.fermi).matrix
    herm = np.max(np.abs(T - T.conj().T))
    gam = np.max(np.abs(oracle.gamma(T) - (np.eye(T.shape[0]) - T)))
    w = np.linalg.eigvalsh(T)
    ok = herm <= 1e-12 and gam <= 1e-12 and w.min() >= -1e-10 and w.max() <= 1 + 1e-10
    return ok, f"hermiticity {herm:.1e}, conjugation {gam:.1e}, spectrum [{w.min():.3g}, {w.max():.3g}]"


CHECKS: list[tuple[str, Callable]] = [
    ("symbol/kernel consistency", _symbol_consistency),
    ("fixture classification", _cases),
    ("XY flux paths agree", _xy_paths),
    ("beta swap antisymmetry", _antisymmetry),
    ("positive flux for beta_R > beta_L", _positivity),
    ("expansion identities", _mu),
    ("density symbol symmetry", _density),
    ("quadrature refinement", _quadrature),
    ("pfaffian squared equals det", _pfaffian),
    ("initial 2-point invariants", _two_point),
]


def run_checks(seed: int = 0) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    out = []
    for name, fn in CHECKS:
        try:
            ok, detail = fn(rng)
        except Exception as exc:  # a crashing check is a failed check
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        out.append(CheckResult(name, bool(ok), detail))
    return out
