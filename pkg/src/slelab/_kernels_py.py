"""Pure NumPy implementations of the hot kernels.

These mirror the compiled versions in ``_kernels_cy`` operation for
operation; the dispatcher in :mod:`slelab.kernels` prefers the compiled
module when it imported successfully.  Interfaces are deliberately flat
(plain arrays and scalars) so both implementations stay trivially in sync.
"""
import numpy as np


def trace_compose(xi, a, out_idx, eps_tip):
    """Evaluate a backward slit-map composition at selected step counts.

    Step j (0-based) is the vertical-slit map centered at ``xi[j]`` with
    half-plane capacity ``(a[j]/2)**2``; for each requested step count k in
    ``out_idx`` the returned point is f_1 o ... o f_k evaluated at the slit
    tip lifted by ``eps_tip``.  The square root is branch-corrected into the
    closed upper half-plane.
    """
    m = len(out_idx)
    out = np.empty(m, dtype=np.complex128)
    if m == 0:
        return out
    # Sweep the map index downward once, activating each requested point
    # when the sweep reaches its innermost step; all active points advance
    # together, so total work is the sum of the step counts.
    order = np.argsort(out_idx, kind="stable")[::-1]
    sorted_k = np.asarray(out_idx)[order]
    z = np.empty(m, dtype=np.complex128)
    ptr = 0
    a2 = a * a
    for j in range(int(sorted_k[0]) - 1, -1, -1):
        while ptr < m and sorted_k[ptr] - 1 == j:
            z[ptr] = xi[j] + 1j * eps_tip
            ptr += 1
        zs = z[:ptr]
        w = zs - xi[j]
        s = np.sqrt(w * w - a2[j])
        np.negative(s, where=s.imag < 0.0, out=s)
        zs[...] = xi[j] + s
    out[order] = z
    return out


def psivar_dp(t, px, py, delta, tab_lx0, tab_dlx, tab_logy):
    """Windowed maximal-sum dynamic program over a log-log gauge table.

    M[i] = max(0, max over j with 0 < t[i] - t[j] < delta of M[j] + psi(r_ij))
    where psi is evaluated by linear interpolation of ``tab_logy`` on the
    uniform log-radius grid (lx0, dlx), extrapolating linearly beyond the
    table ends, psi(0) = 0.  Ties go to the earliest j.  Returns (M, parents)
    with parent -1 marking a fresh partition start.
    """
    n = len(t)
    M = np.zeros(n, dtype=np.float64)
    parents = np.full(n, -1, dtype=np.int64)
    kmax = len(tab_logy) - 2
    lo = 0
    for i in range(1, n):
        ti = t[i]
        while ti - t[lo] >= delta:
            lo += 1
        if lo >= i:
            continue
        dx = px[lo:i] - px[i]
        dy = py[lo:i] - py[i]
        r2 = dx * dx + dy * dy
        pos = (0.5 * np.log(np.maximum(r2, 1e-300)) - tab_lx0) / tab_dlx
        idx = np.clip(np.floor(pos).astype(np.int64), 0, kmax)
        frac = pos - idx
        psi = np.exp(tab_logy[idx] * (1.0 - frac) + tab_logy[idx + 1] * frac)
        psi[r2 == 0.0] = 0.0
        cand = M[lo:i] + psi
        j = int(np.argmax(cand))
        if cand[j] > 0.0:
            M[i] = cand[j]
            parents[i] = lo + j
    return M, parents


def first_entry_grid(px, py, eps, h, x0, y0, nx, ny):
    """First-coverage raster: per cell, the smallest point index within eps.

    Cell (ix, iy) has center (x0 + (ix+0.5) h, y0 + (iy+0.5) h).  Cells no
    point covers hold the sentinel value len(px).
    """
    n = len(px)
    grid = np.full((nx, ny), n, dtype=np.int32)
    eps2 = eps * eps
    for p in range(n):
        cx = (px[p] - x0) / h - 0.5
        cy = (py[p] - y0) / h - 0.5
        r = eps / h
        ix_lo = max(int(np.ceil(cx - r)), 0)
        ix_hi = min(int(np.floor(cx + r)), nx - 1)
        iy_lo = max(int(np.ceil(cy - r)), 0)
        iy_hi = min(int(np.floor(cy + r)), ny - 1)
        if ix_hi < ix_lo or iy_hi < iy_lo:
            continue
        xs = x0 + (np.arange(ix_lo, ix_hi + 1) + 0.5) * h - px[p]
        ys = y0 + (np.arange(iy_lo, iy_hi + 1) + 0.5) * h - py[p]
        sub = grid[ix_lo:ix_hi + 1, iy_lo:iy_hi + 1]
        hit = (xs[:, None] ** 2 + ys[None, :] ** 2 <= eps2) & (sub == n)
        sub[hit] = p
    return grid
