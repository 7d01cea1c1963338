# cython: boundscheck=False, wraparound=False, cdivision=True
# Compiled kernels: slit-map composition, gauge-table variation DP, and
# first-entry rasterization.  Semantics mirror _kernels_py exactly; keep the
# two modules in sync when changing either.
import numpy as np

cimport numpy as cnp
from libc.math cimport ceil, exp, floor, log

cnp.import_array()

cdef extern from "complex.h" nogil:
    double complex csqrt(double complex)
    double cimag(double complex)


def trace_compose(const double[::1] xi, const double[::1] a,
                  const cnp.int64_t[::1] out_idx, double eps_tip):
    """See _kernels_py.trace_compose."""
    cdef Py_ssize_t m = out_idx.shape[0]
    out_np = np.empty(m, dtype=np.complex128)
    cdef double complex[::1] out = out_np
    cdef Py_ssize_t oi, j, k
    cdef double complex z, w, s
    with nogil:
        for oi in range(m):
            k = out_idx[oi]
            z = xi[k - 1] + eps_tip * 1j
            for j in range(k - 1, -1, -1):
                w = z - xi[j]
                s = csqrt(w * w - a[j] * a[j])
                if cimag(s) < 0.0:
                    s = -s
                z = xi[j] + s
            out[oi] = z
    return out_np


def psivar_dp(const double[::1] t, const double[::1] px, const double[::1] py,
              double delta, double tab_lx0, double tab_dlx,
              const double[::1] tab_logy):
    """See _kernels_py.psivar_dp."""
    cdef Py_ssize_t n = t.shape[0]
    M_np = np.zeros(n, dtype=np.float64)
    par_np = np.full(n, -1, dtype=np.int64)
    cdef double[::1] M = M_np
    cdef cnp.int64_t[::1] parents = par_np
    cdef Py_ssize_t kmax = tab_logy.shape[0] - 2
    cdef Py_ssize_t lo = 0, i, j, idx, bj
    cdef double ti, dx, dy, r2, pos, frac, psi, cand, best
    with nogil:
        for i in range(1, n):
            ti = t[i]
            while ti - t[lo] >= delta:
                lo += 1
            best = 0.0
            bj = -1
            for j in range(lo, i):
                dx = px[j] - px[i]
                dy = py[j] - py[i]
                r2 = dx * dx + dy * dy
                if r2 == 0.0:
                    psi = 0.0
                else:
                    pos = (0.5 * log(r2) - tab_lx0) / tab_dlx
                    idx = <Py_ssize_t>floor(pos)
                    if idx < 0:
                        idx = 0
                    elif idx > kmax:
                        idx = kmax
                    frac = pos - idx
                    psi = exp(tab_logy[idx] * (1.0 - frac) + tab_logy[idx + 1] * frac)
                cand = M[j] + psi
                if cand > best:
                    best = cand
                    bj = j
            if best > 0.0:
                M[i] = best
                parents[i] = bj
    return M_np, par_np


def first_entry_grid(const double[::1] px, const double[::1] py, double eps, double h,
                     double x0, double y0, Py_ssize_t nx, Py_ssize_t ny):
    """See _kernels_py.first_entry_grid."""
    cdef Py_ssize_t n = px.shape[0]
    grid_np = np.full((nx, ny), n, dtype=np.int32)
    cdef cnp.int32_t[:, ::1] grid = grid_np
    cdef double eps2 = eps * eps, r = eps / h
    cdef Py_ssize_t p, ix, iy, ix_lo, ix_hi, iy_lo, iy_hi
    cdef double cx, cy, ddx, ddy
    with nogil:
        for p in range(n):
            cx = (px[p] - x0) / h - 0.5
            cy = (py[p] - y0) / h - 0.5
            ix_lo = <Py_ssize_t>ceil(cx - r)
            ix_hi = <Py_ssize_t>floor(cx + r)
            iy_lo = <Py_ssize_t>ceil(cy - r)
            iy_hi = <Py_ssize_t>floor(cy + r)
            if ix_lo < 0:
                ix_lo = 0
            if ix_hi > nx - 1:
                ix_hi = nx - 1
            if iy_lo < 0:
                iy_lo = 0
            if iy_hi > ny - 1:
                iy_hi = ny - 1
            for ix in range(ix_lo, ix_hi + 1):
                ddx = x0 + (ix + 0.5) * h - px[p]
                for iy in range(iy_lo, iy_hi + 1):
                    if grid[ix, iy] != n:
                        continue
                    ddy = y0 + (iy + 0.5) * h - py[p]
                    if ddx * ddx + ddy * ddy <= eps2:
                        grid[ix, iy] = <cnp.int32_t>p
    return grid_np
