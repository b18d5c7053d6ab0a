"""Command-line front end.

Exit codes: 0 success, 1 failed self-check, 2 inadmissible model for a flux
request, 3 unusable config or lattice parameters, 4 non-convergence.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from . import flux, model, oracle
from .config import ConfigError, load_model
from .errors import (
    ConfigTooSmall,
    EigenNotConverged,
    InadmissibleCase,
    QuadratureNotConverged,
    WindowTooShort,
    inadmissible_diagnosis,
)

EXIT_OK, EXIT_CHECK_FAILED, EXIT_INADMISSIBLE, EXIT_CONFIG, EXIT_NO_CONVERGENCE = 0, 1, 2, 3, 4
FLUX_COLUMNS = ["case_id", "beta_L", "beta_R", "J", "sigma", "quad_error", "subintervals", "closed_form_J"]


def fmt(x) -> str:
    """17 significant digits so that output is reproducible byte for byte."""
    if x is None:
        return ""
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.17g}"


def _csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([v if isinstance(v, str) else fmt(v) for v in r])
    return buf.getvalue()


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, newline="\n")
    else:
        sys.stdout.write(text)


def _flux_row(rep: flux.FluxReport, beta_L: float, beta_R: float) -> list:
    return [rep.case_id, beta_L, beta_R, rep.J, rep.sigma, rep.quad_error, rep.subinterval_count, rep.closed_form_J]


def _parse_axis(spec: str) -> np.ndarray:
    lo, hi, n = spec.split(":")
    n = int(n)
    if n < 1:
        raise ValueError("grid axis needs at least one point")
    return np.linspace(float(lo), float(hi), n)


def cmd_classify(args) -> int:
    r = model.classify(load_model(args.config))
    st = ",".join(str(v) for v in r.spectral_type)
    _emit(f"case={r.case_id} spectral_type=[{st}] flux_admissible={str(r.flux_admissible).lower()}\n", args.out)
    return EXIT_OK


def cmd_spectrum(args) -> int:
    m = load_model(args.config)
    _emit(_csv(["lower", "upper"], [[lo, hi] for lo, hi in model.spectrum(m)]), args.out)
    return EXIT_OK


def cmd_flux(args) -> int:
    m = load_model(args.config)
    rep = flux.heat_flux(m, args.tol)
    _emit(_csv(FLUX_COLUMNS, [_flux_row(rep, m.beta_L, m.beta_R)]), args.out)
    return EXIT_OK


def cmd_sweep(args) -> int:
    m = load_model(args.config)
    if args.grid:
        try:
            left, right = args.grid.split(",")
            pairs = [(bl, br) for bl in _parse_axis(left) for br in _parse_axis(right)]
        except ValueError as exc:
            raise ConfigError(f"bad --grid {args.grid!r}: expected LO:HI:N,LO:HI:N") from exc
    else:
        pairs = [(m.beta_L, m.beta_R)]
    rows = []
    for row in flux.flux_sweep(m, pairs, quad_tol=args.tol):
        if row.report is None:
            case = model.case_id(m)
            rows.append([case, row.beta_L, row.beta_R, "", "", "", "", ""])
        else:
            rows.append(_flux_row(row.report, row.beta_L, row.beta_R))
    _emit(_csv(FLUX_COLUMNS, rows), args.out)
    return EXIT_OK


def _lattice(m, args) -> oracle.LatticeConfig:
    return oracle.LatticeConfig.for_model(m, N=args.N, x_L=args.xL, x_R=args.xR,
                                          t_max=args.tmax, t_samples=args.samples)


def cmd_oracle(args) -> int:
    m = load_model(args.config)
    analytic = flux.heat_flux(m, args.tol).J
    res = oracle.ness_flux(m, _lattice(m, args))
    rel = abs(res.J_avg - analytic) / abs(analytic) if analytic != 0 else None
    summary = {"J_avg": res.J_avg, "J_std": res.J_std, "J_R_avg": res.J_R_avg,
               "analytic_J": analytic, "rel_dev": rel}
    text = "{" + ", ".join(f'"{k}": {fmt(v) if v is not None else "null"}' for k, v in summary.items()) + "}\n"
    _emit(text, args.out)
    if args.series:
        rows = [[t, a, b] for t, a, b in zip(res.times, res.J_series, res.J_R_series)]
        Path(args.series).write_text(_csv(["t", "J", "J_R"], rows), newline="\n")
    return EXIT_OK


def cmd_correlator(args) -> int:
    from .pfaffian import quasifree_correlator

    m = load_model(args.config)
    cfg = _lattice(m, args)
    H = oracle.build_hamiltonian(m, cfg)
    H0, D0 = oracle.build_decoupled(m, cfg, H)
    T0 = oracle.initial_two_point(H0, D0, cfg.fermi, labels=cfg.regions()).matrix
    T = oracle.evolved_two_point(oracle.Propagator(H), T0, args.t) if args.t else T0
    n_sites = cfg.n_sites
    vecs = []
    for tok in args.modes.split(","):
        try:
            x_str, comp = tok.split(":") if ":" in tok else (tok, "1")
            x, comp = int(x_str), int(comp)
        except ValueError as exc:
            raise ConfigError(f"bad mode {tok!r}: expected SITE[:1|2]") from exc
        if abs(x) > cfg.N or comp not in (1, 2):
            raise ConfigError(f"mode {tok!r} outside the lattice")
        v = np.zeros(2 * n_sites, dtype=np.complex128)
        v[x + cfg.N + (comp - 1) * n_sites] = 1.0
        vecs.append(v)
    val = quasifree_correlator(lambda i, j: oracle.two_point_value(T, vecs[i], vecs[j]), len(vecs))
    _emit(f'{{"re": {fmt(val.real)}, "im": {fmt(val.imag)}}}\n', args.out)
    return EXIT_OK


def cmd_check(args) -> int:
    from .selfcheck import run_checks

    results = run_checks(args.seed)
    width = max(len(r.name) for r in results)
    lines = [f"{'PASS' if r.passed else 'FAIL'}  {r.name:<{width}}  {r.detail}" for r in results]
    failed = sum(not r.passed for r in results)
    lines.append(f"{len(results) - failed}/{len(results)} checks passed")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK if failed == 0 else EXIT_CHECK_FAILED


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="chainflux", description="Heat flux of quasifree fermionic chains.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text, needs_config=True):
        sp = sub.add_parser(name, help=help_text)
        if needs_config:
            sp.add_argument("config", help="model JSON file")
        sp.add_argument("--out", help="write results here instead of stdout")
        sp.set_defaults(func=fn)
        return sp

    add("classify", cmd_classify, "spectral case of the model")
    add("spectrum", cmd_spectrum, "band intervals as CSV")
    sp = add("flux", cmd_flux, "analytic heat flux as a CSV row")
    sp.add_argument("--tol", type=float, default=flux.DEFAULT_QUAD_TOL)
    sp = add("sweep", cmd_sweep, "flux over a (beta_L, beta_R) grid")
    sp.add_argument("--tol", type=float, default=flux.DEFAULT_QUAD_TOL)
    sp.add_argument("--grid", help="LO:HI:N,LO:HI:N for beta_L and beta_R")
    for name, fn, text in (("oracle", cmd_oracle, "finite-lattice flux compared with the analytic value"),
                           ("correlator", cmd_correlator, "quasifree n-point function on the lattice")):
        sp = add(name, fn, text)
        sp.add_argument("--N", type=int, default=100, help="lattice half-width")
        sp.add_argument("--xL", type=int, default=0)
        sp.add_argument("--xR", type=int, default=0)
        sp.add_argument("--tmax", type=float, default=None, help="default: largest t before edge echoes")
        sp.add_argument("--samples", type=int, default=oracle.MIN_SAMPLES)
        sp.add_argument("--tol", type=float, default=flux.DEFAULT_QUAD_TOL)
    sub.choices["oracle"].add_argument("--series", help="CSV dump of t, J(t), J_R(t)")
    sub.choices["correlator"].add_argument("--t", type=float, default=0.0, help="evolution time")
    sub.choices["correlator"].add_argument("--modes", required=True,
                                           help="comma list of SITE[:1|2] basis vectors, e.g. 0:1,1:2")
    sp = add("check", cmd_check, "run the invariant suite", needs_config=False)
    sp.add_argument("--seed", type=int, default=0)
    return p


def run(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except InadmissibleCase as exc:
        print(inadmissible_diagnosis(exc.case_id), file=sys.stderr)
        return EXIT_INADMISSIBLE
    except (ConfigTooSmall, WindowTooShort) as exc:
        print(f"lattice error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (QuadratureNotConverged, EigenNotConverged) as exc:
        print(f"not converged: {exc}", file=sys.stderr)
        return EXIT_NO_CONVERGENCE


def main() -> None:
    sys.exit(run())
