"""Wall-clock comparison of the compiled and pure-Python kernels.

    python3 bench/bench_kernels.py [--sizes 50,101,201,402] [--repeat 3]

Also times numpy's LAPACK eigh for scale. Results differ between the two
backends only at rounding level; the last column reports that difference.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from chainflux import kernels


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t)
    return min(times), out


def main() -> None:
    p = argparse.ArgumentParser()
    p.add_argument("--sizes", default="50,101,201,402")
    p.add_argument("--repeat", type=int, default=3)
    args = p.parse_args()
    rng = np.random.default_rng(0)
    backends = [("python", kernels.python_backend)]
    if kernels.compiled_backend is not None:
        backends.insert(0, ("compiled", kernels.compiled_backend))
    else:
        print("compiled extension not built; timing the fallback only")

    print(f"{'kernel':<10}{'n':>6}" + "".join(f"{name:>12}" for name, _ in backends) + f"{'lapack':>12}{'max diff':>12}")
    for n in (int(s) for s in args.sizes.split(",")):
        a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        h = 0.5 * (a + a.conj().T)
        row, vals = [], []
        for _, be in backends:
            t, (w, *_rest) = best_of(lambda: be.jacobi_eigh(h), args.repeat)
            row.append(t)
            vals.append(w)
        t_lapack, _ = best_of(lambda: np.linalg.eigh(h), args.repeat)
        diff = max(float(np.max(np.abs(v - vals[0]))) for v in vals)
        print(f"{'jacobi':<10}{n:>6}" + "".join(f"{t:>11.4f}s" for t in row) + f"{t_lapack:>11.4f}s{diff:>12.1e}")

        m = 2 * (n // 2)
        s = rng.normal(size=(m, m)) + 1j * rng.normal(size=(m, m))
        s = s - s.T
        row, vals = [], []
        for _, be in backends:
            t, pf = best_of(lambda: be.pfaffian_parlett_reid(s), args.repeat)
            row.append(t)
            vals.append(pf)
        diff = max(abs(v - vals[0]) / abs(vals[0]) for v in vals)
        print(f"{'pfaffian':<10}{m:>6}" + "".join(f"{t:>11.4f}s" for t in row) + f"{'':>12}{diff:>12.1e}")


if __name__ == "__main__":
    main()
