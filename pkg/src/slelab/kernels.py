"""Kernel dispatch: compiled extension when available, NumPy fallback otherwise.

The compiled module is selected once at import time.  Set ``SLELAB_PURE=1``
before import to force the fallback (used by the parity tests and the
kernel benchmark).  Both implementations share these wrappers, which
normalize dtypes and validate arguments, so results are interchangeable to
floating-point roundoff and deterministic within one installation.
"""
import os

import numpy as np

from . import _kernels_py

if os.environ.get("SLELAB_PURE"):
    _impl = _kernels_py
    HAVE_COMPILED = False
else:
    try:
        from . import _kernels_cy as _impl
        HAVE_COMPILED = True
    except ImportError:  # pragma: no cover - depends on build environment
        _impl = _kernels_py
        HAVE_COMPILED = False


def backend_name():
    return "compiled" if HAVE_COMPILED else "numpy"


def _f64(x):
    return np.ascontiguousarray(x, dtype=np.float64)


# Above this many output points the NumPy implementation, which batches
# the complex slit-map arithmetic across all tips per step, outruns the
# compiled scalar loop (measured crossover near 512 on 1e5-step chains).
_TRACE_BATCH_CUTOVER = 512


def trace_compose(xi, a, out_idx, eps_tip, impl=None):
    """Slit-map composition at the requested step counts (1-based).

    Backend choice depends only on the workload shape (wide output batches
    go to the vectorized implementation), so results stay deterministic;
    the two backends agree to floating-point roundoff.
    """
    xi = _f64(xi)
    a = _f64(a)
    idx = np.ascontiguousarray(out_idx, dtype=np.int64)
    if len(xi) != len(a):
        raise ValueError("xi and a must have equal length")
    if len(idx) and (idx.min() < 1 or idx.max() > len(xi)):
        raise ValueError("out_idx entries must lie in [1, len(xi)]")
    if not eps_tip > 0.0:
        raise ValueError("eps_tip must be positive")
    if impl is None:
        impl = _kernels_py if len(idx) >= _TRACE_BATCH_CUTOVER else _impl
    return impl.trace_compose(xi, a, idx, float(eps_tip))


def psivar_dp(t, px, py, delta, table, impl=None):
    """Variation DP against a :class:`GaugeTable`; returns (M, parents)."""
    return (impl or _impl).psivar_dp(
        _f64(t), _f64(px), _f64(py), float(delta),
        table.lx0, table.dlx, table.log_values)


def first_entry_grid(px, py, eps, h, x0, y0, nx, ny, impl=None):
    """First-coverage raster of a point sequence; sentinel = len(px)."""
    return (impl or _impl).first_entry_grid(
        _f64(px), _f64(py), float(eps), float(h),
        float(x0), float(y0), int(nx), int(ny))


class GaugeTable:
    """Uniform log-log interpolation table for a positive increasing gauge.

    The DP kernels evaluate the gauge millions of times; a dense table keeps
    that O(1) per pair for arbitrary gauges (including ones defined through
    numerical inversion).  Linear interpolation of log psi against log r on
    ``knots`` points; relative error is about (grid spacing)^2/8 times the
    log-log curvature, far below the tolerances of every consumer.  Outside
    [r_lo, r_hi] the edge segments extrapolate linearly (exact for power-law
    tails).
    """

    def __init__(self, fn, r_lo, r_hi, knots=8193):
        if not (r_lo > 0.0 and r_hi > r_lo):
            raise ValueError(f"need 0 < r_lo < r_hi, got [{r_lo}, {r_hi}]")
        log_r = np.linspace(np.log(r_lo), np.log(r_hi), int(knots))
        vals = np.asarray(fn(np.exp(log_r)), dtype=np.float64)
        if np.any(vals <= 0.0) or np.any(~np.isfinite(vals)):
            raise ValueError("gauge must be positive and finite on the table range")
        self.lx0 = float(log_r[0])
        self.dlx = float(log_r[1] - log_r[0])
        self.log_values = np.ascontiguousarray(np.log(vals))

    def __call__(self, r):
        """Evaluate the tabulated gauge (with end extrapolation); psi(0) = 0."""
        arr = np.atleast_1d(np.asarray(r, dtype=np.float64))
        pos = (np.log(np.maximum(arr, 1e-300)) - self.lx0) / self.dlx
        idx = np.clip(np.floor(pos).astype(np.int64), 0, len(self.log_values) - 2)
        frac = pos - idx
        out = np.exp(self.log_values[idx] * (1.0 - frac)
                     + self.log_values[idx + 1] * frac)
        out[arr == 0.0] = 0.0
        if np.isscalar(r) or getattr(r, "ndim", 1) == 0:
            return float(out[0])
        return out
