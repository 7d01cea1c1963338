"""Benchmark the compiled kernels against the NumPy fallback.

Times the three hot kernels on representative workloads and reports the
speedup plus the maximum cross-backend deviation (the implementations
share exact semantics; deviations are floating-point roundoff only).

Run from a checkout with the package installed (or with src/ on
PYTHONPATH)::

    python3 benchmarks/bench_kernels.py [--scale SMALL_OR_FULL]
"""

import argparse
import time

import numpy as np

from slelab import _kernels_py, kernels, loewner
from slelab.kernels import GaugeTable
from slelab.rng import stream


def _time(fn, repeats=3):
    best = float("inf")
    result = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def bench_trace_compose(n_steps, n_out, compiled):
    rng = stream(0, 1)
    dt = 1.0 / n_steps
    xi = np.cumsum(rng.normal(0.0, np.sqrt(2.6 * dt), n_steps))
    a = np.full(n_steps, 2.0 * dt)
    idx = np.unique(np.linspace(1, n_steps, n_out).astype(np.int64))
    eps = dt ** 0.6

    t_py, z_py = _time(lambda: kernels.trace_compose(xi, a, idx, eps,
                                                     impl=_kernels_py), 1)
    row = {"kernel": f"trace_compose(n={n_steps}, m={len(idx)})",
           "numpy_s": t_py}
    if compiled is not None:
        t_cy, z_cy = _time(lambda: kernels.trace_compose(xi, a, idx, eps,
                                                         impl=compiled))
        row["compiled_s"] = t_cy
        row["max_dev"] = float(np.max(np.abs(z_cy - z_py)))
    return row


def bench_psivar(n, delta, compiled):
    path = loewner.sample_bm(dim=1, T=1.0, n=n, seed=(0, 2))
    seg = np.hypot(*np.diff(path.points, axis=0).T)
    pos = seg[seg > 0]
    table = GaugeTable(lambda x: x ** 2.2, float(pos.min()) * 1e-3,
                       float(pos.sum()))
    args = (path.times, path.points[:, 0], path.points[:, 1], delta, table)

    t_py, res_py = _time(lambda: kernels.psivar_dp(*args, impl=_kernels_py), 1)
    row = {"kernel": f"psivar_dp(n={n}, delta={delta})", "numpy_s": t_py}
    if compiled is not None:
        t_cy, res_cy = _time(lambda: kernels.psivar_dp(*args, impl=compiled))
        row["compiled_s"] = t_cy
        row["max_dev"] = float(np.max(np.abs(res_cy[0] - res_py[0])))
    return row


def bench_first_entry(n, grid, compiled):
    rng = stream(0, 3)
    steps = rng.normal(0.0, 1.0 / np.sqrt(n), size=(n, 2))
    pts = np.cumsum(steps, axis=0)
    lo = pts.min() - 0.15
    span = pts.max() - lo + 0.3
    h = span / grid
    args = (pts[:, 0], pts[:, 1], 8.0 * h, h, lo, lo, grid, grid)

    t_py, g_py = _time(lambda: kernels.first_entry_grid(*args,
                                                        impl=_kernels_py), 1)
    row = {"kernel": f"first_entry_grid(n={n}, {grid}x{grid})",
           "numpy_s": t_py}
    if compiled is not None:
        t_cy, g_cy = _time(lambda: kernels.first_entry_grid(*args,
                                                            impl=compiled))
        row["compiled_s"] = t_cy
        row["max_dev"] = float(np.max(np.abs(g_cy.astype(np.int64)
                                             - g_py.astype(np.int64))))
    return row


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--scale", choices=("small", "full"), default="small")
    args = parser.parse_args()

    compiled = None
    if kernels.HAVE_COMPILED:
        from slelab import _kernels_cy as compiled
    else:
        print("compiled backend unavailable; timing the NumPy fallback only")

    if args.scale == "full":
        rows = [
            bench_trace_compose(100_000, 4096, compiled),
            bench_psivar(2 ** 15, 2.0 ** -4, compiled),
            bench_first_entry(2 ** 18, 2048, compiled),
        ]
    else:
        rows = [
            bench_trace_compose(20_000, 1024, compiled),
            bench_psivar(2 ** 13, 2.0 ** -4, compiled),
            bench_first_entry(2 ** 16, 1024, compiled),
        ]

    width = max(len(r["kernel"]) for r in rows)
    print(f"{'kernel':<{width}}  {'numpy':>9}  {'compiled':>9}  "
          f"{'speedup':>8}  {'max dev':>9}")
    for r in rows:
        if "compiled_s" in r:
            print(f"{r['kernel']:<{width}}  {r['numpy_s']:9.4f}  "
                  f"{r['compiled_s']:9.4f}  "
                  f"{r['numpy_s'] / r['compiled_s']:7.1f}x  "
                  f"{r['max_dev']:9.2e}")
        else:
            print(f"{r['kernel']:<{width}}  {r['numpy_s']:9.4f}  "
                  f"{'-':>9}  {'-':>8}  {'-':>9}")


if __name__ == "__main__":
    main()
