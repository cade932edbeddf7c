"""Timing comparison of the JIT kernels against their pure-numpy fallbacks.

Run:  python benchmarks/bench_kernels.py [--repeats N]
The numba path needs a warm-up call (compilation) which is excluded from
the timings. Set QUASICAT_DISABLE_NUMBA=1 to confirm the package still
works without numba; this script times both paths explicitly either way.
"""

import argparse
import math
import time

import numpy as np

from quasicat._kernels import (
    HAS_NUMBA,
    _husimi_grid_numpy,
    _jc_propagate_numpy,
)

if HAS_NUMBA:
    from quasicat._kernels import _husimi_grid_numba, _jc_propagate_numba


def _time(fn, repeats):
    best = math.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def bench_jc(repeats):
    rng = np.random.default_rng(0)
    dim, batch, steps = 256, 64, 200
    psi = rng.normal(size=(dim, batch, 2)) + 1j * rng.normal(size=(dim, batch, 2))
    psi /= np.linalg.norm(psi)
    g, delta, dt = 1.0, 0.7, 0.01

    def run_numpy():
        cur = psi
        for _ in range(steps):
            cur = _jc_propagate_numpy(cur, g, delta, dt)
        return cur

    rows = []
    t_np, ref = _time(run_numpy, repeats)
    rows.append(("jc_propagate", "numpy", t_np, 1.0, 0.0))
    if HAS_NUMBA:

        def run_numba():
            cur = psi
            for _ in range(steps):
                cur = _jc_propagate_numba(cur, g, delta, dt)
            return cur

        run_numba()  # compile
        t_nb, out = _time(run_numba, repeats)
        err = float(np.abs(out - ref).max())
        rows.append(("jc_propagate", "numba", t_nb, t_np / t_nb, err))
    return rows


def bench_husimi(repeats):
    rng = np.random.default_rng(1)
    dim, points = 64, 161
    vec = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    vec /= np.linalg.norm(vec)
    rho = np.outer(vec, vec.conj())
    axis = np.linspace(-6.0, 6.0, points)

    rows = []
    t_np, ref = _time(lambda: _husimi_grid_numpy(rho, axis, axis), repeats)
    rows.append(("husimi_grid", "numpy", t_np, 1.0, 0.0))
    if HAS_NUMBA:
        _husimi_grid_numba(rho, axis[:4], axis[:4])  # compile
        t_nb, out = _time(lambda: _husimi_grid_numba(rho, axis, axis), repeats)
        err = float(np.abs(out - ref).max())
        rows.append(("husimi_grid", "numba", t_nb, t_np / t_nb, err))
    return rows


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    if not HAS_NUMBA:
        print("numba not importable; timing the numpy fallback only")

    rows = bench_jc(args.repeats) + bench_husimi(args.repeats)
    print(f"{'kernel':<14}{'path':<8}{'best (s)':>12}{'speedup':>10}{'max |diff|':>14}")
    for kernel, path, seconds, speedup, err in rows:
        print(f"{kernel:<14}{path:<8}{seconds:>12.4f}{speedup:>10.2f}{err:>14.2e}")


if __name__ == "__main__":
    main()
