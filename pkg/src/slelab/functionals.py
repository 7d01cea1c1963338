"""Path regularity functionals: variation sums, moduli, LIL statistics.

Everything here evaluates a sampled path against a gauge:

* ``psi_variation_sum`` — the maximal sum of psi(|increment|) over
  partitions supported on sample times with mesh below delta, by exact
  dynamic programming (the continuum supremum restricted to the grid).
* ``psi_variation_seminorm`` — the associated seminorm
  inf{M : sup-partition sum of psi(|increment|/M) <= 1}.
* ``moc_ratio`` — the worst ratio |increment| / omega(time gap).
* ``lil_statistic`` — shell-wise growth ratios |X(t)-X(0)| / gauge(t) on
  dyadic shells, toward 0 or infinity.
* ``slowdown_reparam`` — the dyadic slowdown time change: per dyadic
  interval the largest s <= 1 with osc <= M sigma(2^-k / s), the induced
  clock T(t) = integral of 1/s, and the modulus certificate for the
  reparametrized path.
* ``vitali_extract`` — greedy disjoint intervals whose increments beat
  sigma, a constructive cover witness.
* ``ball_packing_count`` — greedy lower bound on disjoint-ball packings.
* ``conditional_bc_bound`` — the abstract second-moment/Borel-Cantelli
  style inequality exp(-(1-(1-p)/q) sum p_i) < q with its implied bound.

Dynamic programs restrict partitions to sample times, which can only
under-estimate the continuum supremum; the bias is the modulus at the grid
scale and is monitored by resolution-halving comparisons in the tests.
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np

from .errors import (
    EmptyWindow,
    InfiniteTimeChange,
    InvalidProbability,
    LengthMismatch,
    NonFiniteValue,
    OutOfDomain,
)
from .gauges import invert_monotone
from .kernels import GaugeTable, psivar_dp

__all__ = [
    "VariationResult",
    "psi_variation_sum",
    "psi_variation_seminorm",
    "moc_ratio",
    "LilResult",
    "lil_statistic",
    "SlowdownResult",
    "slowdown_reparam",
    "VitaliResult",
    "vitali_extract",
    "ball_packing_count",
    "BorelCantelliBound",
    "conditional_bc_bound",
]

# Below this many window pairs the DP evaluates the gauge callable exactly;
# above it, a dense log-log interpolation table keeps the cost O(1) per pair.
_EXACT_PAIR_BUDGET = 2_000_000


def _window_starts(times, delta):
    """First index j per i with t[i] - t[j] < delta (strict window)."""
    if math.isinf(delta):
        return np.zeros(len(times), dtype=np.int64)
    return np.searchsorted(times, times - delta, side="right")


def _psi_of_radii(psi, r):
    """Evaluate psi elementwise with psi(0) = 0."""
    out = np.zeros_like(r)
    nz = r > 0.0
    if np.any(nz):
        out[nz] = psi(r[nz])
    return out


def _dp_exact(times, pts, psi, delta, lows):
    """Reference DP with exact gauge evaluation (same recurrence as kernel)."""
    n = len(times)
    best = np.zeros(n)
    parents = np.full(n, -1, dtype=np.int64)
    for i in range(1, n):
        lo = lows[i]
        if lo >= i:
            continue
        d = pts[lo:i] - pts[i]
        r = np.hypot(d[:, 0], d[:, 1])
        cand = best[lo:i] + _psi_of_radii(psi, r)
        j = int(np.argmax(cand))
        if cand[j] > 0.0:
            best[i] = cand[j]
            parents[i] = lo + j
    return best, parents


def _dp_table(times, pts, psi, delta):
    """Kernel DP against an interpolation table spanning the data radii."""
    d = np.diff(pts, axis=0)
    seg = np.hypot(d[:, 0], d[:, 1])
    diam_bound = float(np.sum(seg))
    r_hi = max(diam_bound, 1e-300)
    nz = seg[seg > 0.0]
    r_lo = float(nz.min()) * 1e-3 if len(nz) else r_hi * 0.5
    if not r_lo < r_hi:
        r_lo = r_hi * 0.5
    table = GaugeTable(psi, r_lo, r_hi)
    return psivar_dp(times, pts[:, 0], pts[:, 1], delta, table)


def _best_chain(best, parents, times):
    i = int(np.argmax(best))
    chain = [i]
    while parents[chain[-1]] >= 0:
        chain.append(int(parents[chain[-1]]))
    chain.reverse()
    return np.asarray(chain, dtype=np.int64)


@dataclasses.dataclass(frozen=True)
class VariationResult:
    """Maximal partition sum, the argmax partition, and its mesh bound.

    ``value`` is recomputed from ``optimal_partition`` with the exact gauge,
    so the identity value = sum of psi over partition increments holds by
    construction.
    """

    value: float
    optimal_partition: np.ndarray
    mesh_delta: float

    def __post_init__(self):
        part = np.ascontiguousarray(
            np.asarray(self.optimal_partition, dtype=np.float64))
        if part.ndim != 1 or len(part) < 1:
            raise LengthMismatch("partition must be a nonempty 1-d time array")
        gaps = np.diff(part)
        if np.any(gaps <= 0.0) or np.any(gaps >= self.mesh_delta):
            raise OutOfDomain(
                "partition times must be strictly increasing with gaps "
                f"below {self.mesh_delta}")
        if not (np.isfinite(self.value) and self.value >= 0.0):
            raise NonFiniteValue(f"variation value {self.value} invalid")
        part.setflags(write=False)
        object.__setattr__(self, "optimal_partition", part)
        object.__setattr__(self, "value", float(self.value))
        object.__setattr__(self, "mesh_delta", float(self.mesh_delta))


def psi_variation_sum(path, psi, delta, max_exact_pairs=_EXACT_PAIR_BUDGET):
    """Maximal sum of psi(|X_{t_i} - X_{t_{i-1}}|) over mesh-delta partitions.

    Dynamic programming over sample times: M[i] is the best sum of any
    partition ending at sample i, where consecutive partition times must
    satisfy 0 < t_i - t_j < delta.  Ties break toward the earlier previous
    index.  When the total window-pair count exceeds ``max_exact_pairs``
    the gauge is evaluated through a dense interpolation table instead of
    directly (identical recurrence, about 1e-7 relative gauge error).
    The returned value is recomputed from the argmax partition with the
    exact gauge.
    """
    if not delta > 0.0:
        raise OutOfDomain(f"delta must be positive, got {delta}")
    times = path.times
    pts = path.points
    if len(times) < 2:
        return VariationResult(value=0.0, optimal_partition=times[:1],
                               mesh_delta=float(delta))
    lows = _window_starts(times, delta)
    pairs = int(np.sum(np.arange(len(times)) - lows))
    if pairs <= max_exact_pairs:
        best, parents = _dp_exact(times, pts, psi, delta, lows)
    else:
        best, parents = _dp_table(times, pts, psi, delta)
    chain = _best_chain(best, parents, times)
    if len(chain) < 2:
        return VariationResult(value=0.0, optimal_partition=times[chain],
                               mesh_delta=float(delta))
    d = np.diff(pts[chain], axis=0)
    value = float(np.sum(_psi_of_radii(psi, np.hypot(d[:, 0], d[:, 1]))))
    return VariationResult(value=value, optimal_partition=times[chain],
                           mesh_delta=float(delta))


def psi_variation_seminorm(path, psi, delta, rel_tol=1e-6):
    """inf{M > 0 : sup over mesh-delta partitions of sum psi(|dX|/M) <= 1}.

    Bisection on M over the (monotone in M) DP feasibility check; returns
    the feasible upper end of the final bracket, so the check holds at the
    returned value and fails just below it.  Constant paths return 0.
    """
    if not delta > 0.0:
        raise OutOfDomain(f"delta must be positive, got {delta}")
    times = path.times
    pts = path.points
    if len(times) < 2:
        return 0.0
    d = np.diff(pts, axis=0)
    seg = np.hypot(d[:, 0], d[:, 1])
    if not np.any(seg > 0.0):
        return 0.0

    def feasible(m):
        res = psi_variation_sum(path, lambda r: psi(r / m), delta)
        return res.value <= 1.0

    # Bracket: start at the diameter bound (always feasible when psi(1) <= 1,
    # but proven by testing), shrink/grow geometrically.
    hi = float(np.sum(seg))
    for _ in range(200):
        if feasible(hi):
            break
        hi *= 4.0
    else:
        raise OutOfDomain("could not bracket the seminorm from above")
    lo = hi
    for _ in range(200):
        lo /= 4.0
        if not feasible(lo):
            break
    else:
        return 0.0
    for _ in range(200):
        if hi - lo <= rel_tol * hi:
            break
        mid = math.sqrt(lo * hi)
        if feasible(mid):
            hi = mid
        else:
            lo = mid
    return hi


def moc_ratio(path, omega, delta):
    """sup over sampled pairs with 0 < t - s < delta of |X_t - X_s|/omega(t-s)."""
    if not delta > 0.0:
        raise OutOfDomain(f"delta must be positive, got {delta}")
    times = path.times
    pts = path.points
    if len(times) < 2:
        return 0.0
    lows = _window_starts(times, delta)
    worst = 0.0
    for i in range(1, len(times)):
        lo = lows[i]
        if lo >= i:
            continue
        d = pts[lo:i] - pts[i]
        r = np.hypot(d[:, 0], d[:, 1])
        ratios = r / omega(times[i] - times[lo:i])
        worst = max(worst, float(ratios.max()))
    return worst


@dataclasses.dataclass(frozen=True)
class LilResult:
    """Shell-wise maxima of |X(t)-X(t0)| / gauge(t-t0) on dyadic shells.

    ``direction`` 'zero' uses shells [2^-k-1, 2^-k], 'infinity' uses
    [2^k, 2^k+1].  Empty shells carry count 0 and a NaN maximum and are
    skipped in ``overall``.
    """

    direction: str
    ks: np.ndarray
    shell_max: np.ndarray
    shell_counts: np.ndarray
    overall: float


def lil_statistic(path, gauge, k_min, k_max, direction="zero"):
    """Iterated-logarithm statistic of a path at its start point.

    For each dyadic shell (indexed k_min..k_max) the maximum of
    |X(t) - X(t0)| / gauge(t - t0) over samples whose age t - t0 lies in
    the shell; plus the overall maximum across nonempty shells.
    """
    if direction not in ("zero", "infinity"):
        raise OutOfDomain(f"direction must be 'zero' or 'infinity': {direction}")
    if k_max < k_min:
        raise OutOfDomain(f"need k_min <= k_max, got [{k_min}, {k_max}]")
    ages = path.times - path.times[0]
    disp = path.points - path.points[0]
    r = np.hypot(disp[:, 0], disp[:, 1])
    ks = np.arange(int(k_min), int(k_max) + 1, dtype=np.int64)
    shell_max = np.full(len(ks), np.nan)
    shell_counts = np.zeros(len(ks), dtype=np.int64)
    for pos, k in enumerate(ks):
        if direction == "zero":
            lo_age, hi_age = 2.0 ** (-float(k) - 1.0), 2.0 ** (-float(k))
        else:
            lo_age, hi_age = 2.0 ** float(k), 2.0 ** (float(k) + 1.0)
        lo = np.searchsorted(ages, lo_age, side="left")
        hi = np.searchsorted(ages, hi_age, side="right")
        if hi <= lo:
            continue
        shell_counts[pos] = hi - lo
        shell_max[pos] = float(np.max(r[lo:hi] / gauge(ages[lo:hi])))
    seen = shell_counts > 0
    overall = float(np.max(shell_max[seen])) if np.any(seen) else 0.0
    return LilResult(direction=direction, ks=ks, shell_max=shell_max,
                     shell_counts=shell_counts, overall=overall)


def _dyadic_oscillations(path, k_max):
    """Bounding-box oscillation of the path over every dyadic interval.

    Returns a list indexed by level k = 0..k_max of arrays of length 2^k:
    the diagonal of the bounding box of the samples in [j 2^-k, (j+1) 2^-k]
    (samples exactly on a boundary count toward both sides).  The diagonal
    dominates sup |X_t - X_s| over the interval, so every downstream
    inequality stays valid; intervals without samples oscillate 0.
    """
    times = path.times
    n = len(times)
    m = 1 << k_max
    grid = np.arange(m + 1) / m
    idx = np.searchsorted(times, grid)
    # The final boundary is closed: a sample at exactly the grid end belongs
    # to the last interval (searchsorted's left side would drop it).
    idx[-1] = n
    empty = idx[1:] == idx[:-1]
    # A sentinel entry keeps every reduceat segment [idx[j], idx[j+1]) legal
    # even when idx[j] == n; segments that only see the sentinel are the
    # empty intervals, masked below.  The (m+1)-th segment is discarded.
    px = np.append(path.points[:, 0], 0.0)
    py = np.append(path.points[:, 1], 0.0)
    xmin = np.where(empty, np.inf, np.minimum.reduceat(px, idx)[:m])
    xmax = np.where(empty, -np.inf, np.maximum.reduceat(px, idx)[:m])
    ymin = np.where(empty, np.inf, np.minimum.reduceat(py, idx)[:m])
    ymax = np.where(empty, -np.inf, np.maximum.reduceat(py, idx)[:m])
    # reduceat on [idx[j], idx[j+1]) puts a sample sitting exactly on an
    # interior boundary only in the right interval; merge it into the left.
    bpos = idx[1:-1]
    onb = (bpos < n) & (times[np.minimum(bpos, n - 1)] == grid[1:-1])
    left = np.nonzero(onb)[0]
    if len(left):
        np.minimum.at(xmin, left, px[bpos[left]])
        np.maximum.at(xmax, left, px[bpos[left]])
        np.minimum.at(ymin, left, py[bpos[left]])
        np.maximum.at(ymax, left, py[bpos[left]])
    levels = [None] * (k_max + 1)
    for k in range(k_max, -1, -1):
        dx = np.maximum(xmax - xmin, 0.0)
        dy = np.maximum(ymax - ymin, 0.0)
        levels[k] = np.hypot(dx, dy)
        if k:
            xmin = np.minimum(xmin[0::2], xmin[1::2])
            xmax = np.maximum(xmax[0::2], xmax[1::2])
            ymin = np.minimum(ymin[0::2], ymin[1::2])
            ymax = np.maximum(ymax[0::2], ymax[1::2])
    return levels


@dataclasses.dataclass(frozen=True)
class SlowdownResult:
    """Dyadic slowdown s(t), its clock T, and the modulus certificate.

    ``s_fine`` holds s(t) on the finest dyadic grid (min over ancestor
    levels of the per-interval slowdowns); ``T_grid`` the clock at the
    2^k_max + 1 grid points; ``modulus_margin`` the smallest slack of
    (2^alpha + 1) M sigma(|dT|) - |dX| over the checked sample pairs
    (pairs closer than the finest dyadic scale are below the construction's
    resolution and are not certified).
    """

    s_fine: np.ndarray
    T_grid: np.ndarray
    T_samples: np.ndarray
    variation_bound: float
    M: float
    k_max: int
    alpha: float
    modulus_margin: float

    @property
    def total_time(self):
        """T(1), the reparametrized total duration."""
        return float(self.T_grid[-1])

    def s_of_t(self, t):
        """Step-function slowdown s(t) on [0, 1]."""
        t = np.asarray(t, dtype=np.float64)
        j = np.clip((t * len(self.s_fine)).astype(np.int64), 0,
                    len(self.s_fine) - 1)
        return self.s_fine[j]

    def T_of_t(self, t):
        """The clock T(t) = integral_0^t du/s(u), piecewise linear."""
        t = np.asarray(t, dtype=np.float64)
        m = len(self.s_fine)
        j = np.clip((t * m).astype(np.int64), 0, m - 1)
        return self.T_grid[j] + (t - j / m) / self.s_fine[j]


def slowdown_reparam(path, sigma, M, alpha, k_max, check_pairs="auto"):
    """Slow a path on [0, 1] until it has modulus (2^alpha + 1) M sigma.

    Per dyadic interval I_{k,j} (levels k <= k_max) the slowdown is the
    largest s <= 1 with osc(X; I_{k,j}) <= M sigma(2^-k / s), i.e.
    s_{k,j} = min(1, 2^-k / sigma^-1(osc/M)) with the inverse rounded
    upward so the defining inequality is preserved exactly.  s(t) is the
    minimum over levels, T integrates 1/s, and the result records the
    worst margin of the modulus inequality

        |X(t1) - X(t2)| <= (2^alpha + 1) M sigma(|T(t1) - T(t2)|)

    over sampled pairs at separation >= 2^-k_max ('auto' checks all such
    pairs up to about 3e7, then falls back to ~64 logarithmic lag classes).
    ``variation_bound`` is M (2^alpha + 1) T(1)^alpha, the induced bound on
    the sigma^-1-variation.  Raises InfiniteTimeChange when a slowdown
    underflows to zero (M too small for this path at this depth).
    """
    if not M > 0.0:
        raise OutOfDomain(f"M must be positive, got {M}")
    if not 0.0 < alpha <= 1.0:
        raise OutOfDomain(f"alpha must be in (0, 1], got {alpha}")
    if not (0 <= int(k_max) <= 26):
        raise OutOfDomain(f"k_max must be in [0, 26], got {k_max}")
    k_max = int(k_max)
    if path.t0 < -1e-12 or path.t1 > 1.0 + 1e-12:
        raise OutOfDomain(
            f"slowdown needs a path on [0, 1]; got [{path.t0}, {path.t1}]")
    osc_levels = _dyadic_oscillations(path, k_max)
    s_fine = np.ones(1)
    for k in range(k_max + 1):
        osc = osc_levels[k]
        s_k = np.ones_like(osc)
        pos = osc > 0.0
        if np.any(pos):
            root = invert_monotone(sigma, osc[pos] / M, rounding="upper")
            s_k[pos] = np.minimum(1.0, 2.0 ** (-k) / root)
        s_fine = np.minimum(np.repeat(s_fine, 2) if k else s_fine, s_k)
    if np.any(s_fine <= 0.0):
        raise InfiniteTimeChange(
            f"slowdown underflowed at depth {k_max}: M = {M} is too small")
    m = 1 << k_max
    T_grid = np.concatenate([[0.0], np.cumsum((1.0 / m) / s_fine)])
    j = np.clip((path.times * m).astype(np.int64), 0, m - 1)
    T_samples = T_grid[j] + (path.times - j / m) / s_fine[j]
    const = (2.0 ** alpha + 1.0) * M
    margin = _modulus_margin(path, T_samples, sigma, const, 1.0 / m,
                             check_pairs)
    bound = const * float(T_grid[-1]) ** alpha
    return SlowdownResult(s_fine=s_fine, T_grid=T_grid, T_samples=T_samples,
                          variation_bound=bound, M=float(M), k_max=k_max,
                          alpha=float(alpha), modulus_margin=margin)


def _modulus_margin(path, T_samples, sigma, const, min_sep, check_pairs):
    """Worst slack of const*sigma(|dT|) - |dX| over sample pairs >= min_sep."""
    times = path.times
    pts = path.points
    n = len(times)
    if n < 2:
        return math.inf
    margin = math.inf
    all_pairs = n * (n - 1) // 2 <= 30_000_000 if check_pairs == "auto" \
        else check_pairs == "all"
    if all_pairs:
        block = max(1, 2_000_000 // n)
        for start in range(0, n - 1, block):
            stop = min(start + block, n - 1)
            # Rows i in [start, stop) against all columns j >= start; the
            # separation filter keeps exactly the ordered pairs i < j.
            dt = times[None, start:] - times[start:stop, None]
            keep = dt >= min_sep
            if not np.any(keep):
                continue
            dx = pts[None, start:, 0] - pts[start:stop, None, 0]
            dy = pts[None, start:, 1] - pts[start:stop, None, 1]
            dT = T_samples[None, start:] - T_samples[start:stop, None]
            slack = const * sigma(np.maximum(dT, 1e-300)) - np.hypot(dx, dy)
            margin = min(margin, float(slack[keep].min()))
        return margin
    lags = np.unique(np.round(np.geomspace(1, n - 1, 64)).astype(np.int64))
    for lag in lags:
        dt = times[lag:] - times[:-lag]
        keep = dt >= min_sep
        if not np.any(keep):
            continue
        d = pts[lag:] - pts[:-lag]
        dT = (T_samples[lag:] - T_samples[:-lag])[keep]
        slack = const * sigma(dT) - np.hypot(d[:, 0], d[:, 1])[keep]
        margin = min(margin, float(slack.min()))
    return margin


@dataclasses.dataclass(frozen=True)
class VitaliResult:
    """Greedy disjoint intervals whose increments beat the gauge.

    ``gauge_sum`` adds sigma^-1(|dX|) over the intervals with the inverse
    rounded upward, so gauge_sum >= covered_length holds exactly.
    """

    intervals: np.ndarray
    covered_length: float
    gauge_sum: float
    eps: float
    s_max: float


def vitali_extract(path, sigma, eps, s_max):
    """Greedy cover by intervals [t, t+s] with |X_{t+s} - X_t| > sigma(s).

    Scans samples left to right; at each start the smallest sampled
    duration s <= s_max whose increment beats sigma(s) is taken and the
    scan jumps past it.  Returns the (disjoint) intervals, their total
    length, and the sum of sigma^-1(|dX|) over them.
    """
    if not 0.0 < s_max <= eps:
        raise OutOfDomain(f"need 0 < s_max <= eps, got s_max={s_max} eps={eps}")
    times = path.times
    pts = path.points
    n = len(times)
    taken = []
    increments = []
    i = 0
    chunk = 64
    while i < n - 1:
        hi_t = times[i] + s_max
        j_end = int(np.searchsorted(times, hi_t, side="right"))
        found = -1
        for lo in range(i + 1, j_end, chunk):
            hi = min(lo + chunk, j_end)
            d = pts[lo:hi] - pts[i]
            r = np.hypot(d[:, 0], d[:, 1])
            ok = r > sigma(times[lo:hi] - times[i])
            w = np.nonzero(ok)[0]
            if len(w):
                found = lo + int(w[0])
                break
        if found < 0:
            i += 1
            continue
        taken.append((times[i], times[found]))
        d = pts[found] - pts[i]
        increments.append(math.hypot(d[0], d[1]))
        i = found
    if not taken:
        return VitaliResult(intervals=np.empty((0, 2)), covered_length=0.0,
                            gauge_sum=0.0, eps=float(eps), s_max=float(s_max))
    intervals = np.asarray(taken)
    covered = float(np.sum(intervals[:, 1] - intervals[:, 0]))
    gauge_sum = float(np.sum(invert_monotone(sigma, np.asarray(increments),
                                             rounding="upper")))
    return VitaliResult(intervals=intervals, covered_length=covered,
                        gauge_sum=gauge_sum, eps=float(eps),
                        s_max=float(s_max))


def ball_packing_count(points, radius):
    """Size of a greedy packing by disjoint balls of the given radius.

    Scans points in order and accepts a center when it is at least
    2*radius from every accepted one (grid-hashed lookup); the count is a
    lower bound for the maximal packing number.
    """
    if not radius > 0.0:
        raise OutOfDomain(f"radius must be positive, got {radius}")
    pts = np.asarray(points, dtype=np.float64)
    if pts.size == 0:
        return 0
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise LengthMismatch(f"points must have shape (n, 2), got {pts.shape}")
    cell = 2.0 * radius
    sep2 = cell * cell
    buckets = {}
    count = 0
    for x, y in pts:
        ix = math.floor(x / cell)
        iy = math.floor(y / cell)
        clear = True
        for nx in (ix - 1, ix, ix + 1):
            row = buckets.get(nx)
            if row is None:
                continue
            for ny in (iy - 1, iy, iy + 1):
                for (ax, ay) in row.get(ny, ()):
                    if (ax - x) ** 2 + (ay - y) ** 2 < sep2:
                        clear = False
                        break
                if not clear:
                    break
            if not clear:
                break
        if clear:
            buckets.setdefault(ix, {}).setdefault(iy, []).append((x, y))
            count += 1
    return count


@dataclasses.dataclass(frozen=True)
class BorelCantelliBound:
    """Outcome of the conditional second-moment inequality check.

    When ``holds`` the union of the conditioned events has probability at
    least ``lower_bound`` = 1 - q; otherwise the bound degenerates to 0.
    """

    holds: bool
    value: float
    lower_bound: float


def conditional_bc_bound(p, q, p_list):
    """Check exp(-(1 - (1-p)/q) * sum(p_list)) < q and report the bound.

    ``p`` lower-bounds the conditional probabilities P(B_j | A_j), ``q`` is
    the failure probability target, ``p_list`` the unconditional P(A_j).
    """
    p = float(p)
    q = float(q)
    probs = np.asarray(p_list, dtype=np.float64)
    if not 0.0 < p <= 1.0:
        raise InvalidProbability(f"p must be in (0, 1], got {p}")
    if not 0.0 < q < 1.0:
        raise InvalidProbability(f"q must be in (0, 1), got {q}")
    if probs.size and (np.any(probs < 0.0) or np.any(probs > 1.0)
                       or np.any(~np.isfinite(probs))):
        raise InvalidProbability("p_list entries must lie in [0, 1]")
    value = math.exp(-(1.0 - (1.0 - p) / q) * float(np.sum(probs)))
    holds = value < q
    return BorelCantelliBound(holds=holds, value=value,
                              lower_bound=1.0 - q if holds else 0.0)
