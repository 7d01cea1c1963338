"""Sampled planar paths and elementary path functionals.

A :class:`SampledPath` is an immutable pair of arrays: strictly increasing
times and planar points.  One-dimensional processes are embedded with a zero
second coordinate.  All window queries use closed windows ``[lo, hi]``.
"""
from dataclasses import dataclass

import numpy as np

from .errors import (EmptyWindow, LengthMismatch, NonFiniteValue,
                     NonMonotoneTimes)

# Windows holding at most this many samples use the brute-force pairwise
# diameter; larger windows go through a convex hull first.
_BRUTE_DIAMETER_MAX = 2048


@dataclass(frozen=True)
class Interval:
    """Closed time window [lo, hi]."""

    lo: float
    hi: float

    def __post_init__(self):
        if not (np.isfinite(self.lo) and np.isfinite(self.hi)):
            raise NonFiniteValue("interval endpoints must be finite")
        if self.lo > self.hi:
            raise ValueError(f"interval endpoints out of order: {self.lo} > {self.hi}")

    @property
    def length(self):
        return self.hi - self.lo


@dataclass(frozen=True)
class SampledPath:
    """Strictly increasing times with planar sample points.

    The arrays are copied on construction and marked read-only; a path never
    changes after it is built.
    """

    times: np.ndarray   # shape (n,), strictly increasing
    points: np.ndarray  # shape (n, 2)
    label: str = ""

    def __post_init__(self):
        times = np.ascontiguousarray(self.times, dtype=np.float64)
        points = np.ascontiguousarray(self.points, dtype=np.float64)
        if times.ndim != 1:
            raise LengthMismatch(f"times must be 1-d, got shape {times.shape}")
        if points.ndim != 2 or points.shape[1] != 2:
            raise LengthMismatch(f"points must have shape (n, 2), got {points.shape}")
        if len(times) != len(points):
            raise LengthMismatch(
                f"{len(times)} times vs {len(points)} points")
        if len(times) == 0:
            raise LengthMismatch("a path needs at least one sample")
        if not np.all(np.isfinite(times)):
            raise NonFiniteValue("times contain non-finite entries")
        if not np.all(np.isfinite(points)):
            raise NonFiniteValue("points contain non-finite entries")
        if len(times) > 1 and not np.all(np.diff(times) > 0.0):
            raise NonMonotoneTimes("times must be strictly increasing")
        times.setflags(write=False)
        points.setflags(write=False)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "points", points)

    def __len__(self):
        return len(self.times)

    @property
    def t0(self):
        return float(self.times[0])

    @property
    def t1(self):
        return float(self.times[-1])

    def window_indices(self, window):
        """Return (lo, hi) slice bounds of samples with times in the closed window."""
        lo = int(np.searchsorted(self.times, window.lo, side="left"))
        hi = int(np.searchsorted(self.times, window.hi, side="right"))
        return lo, hi

    def restrict(self, window):
        """Sub-path of samples inside the closed window."""
        lo, hi = self.window_indices(window)
        if hi <= lo:
            raise EmptyWindow(f"no samples in [{window.lo}, {window.hi}]")
        return SampledPath(self.times[lo:hi], self.points[lo:hi], self.label)

    def translate(self, offset):
        """Path shifted by a planar offset."""
        off = np.asarray(offset, dtype=np.float64).reshape(2)
        return SampledPath(self.times, self.points + off, self.label)


def make_path(times, points, label=""):
    """Validate and freeze a sampled path.

    One-dimensional point arrays are lifted to the plane with y = 0.
    """
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim == 1:
        pts = np.column_stack([pts, np.zeros_like(pts)])
    return SampledPath(np.asarray(times, dtype=np.float64), pts, label)


def _hull_vertices(pts):
    """Vertices of the convex hull, robust to collinear/degenerate input."""
    from scipy.spatial import ConvexHull, QhullError

    try:
        hull = ConvexHull(pts)
        return pts[hull.vertices]
    except QhullError:
        # Collinear or repeated points: the diameter is realized along the
        # principal direction, so the two extreme projections suffice.
        center = pts.mean(axis=0)
        centered = pts - center
        _, _, vt = np.linalg.svd(centered, full_matrices=False)
        proj = centered @ vt[0]
        return pts[[int(np.argmin(proj)), int(np.argmax(proj))]]


def point_set_diameter(pts):
    """Largest pairwise Euclidean distance in a point set (0 for one point)."""
    pts = np.asarray(pts, dtype=np.float64)
    m = len(pts)
    if m <= 1:
        return 0.0
    if m > _BRUTE_DIAMETER_MAX:
        pts = _hull_vertices(pts)
    d2 = np.sum((pts[:, None, :] - pts[None, :, :]) ** 2, axis=-1)
    return float(np.sqrt(d2.max()))


def oscillation(path, window):
    """Diameter of the sample points with times in the closed window.

    Raises EmptyWindow when no sample falls inside.
    """
    lo, hi = path.window_indices(window)
    if hi <= lo:
        raise EmptyWindow(f"no samples in [{window.lo}, {window.hi}]")
    return point_set_diameter(path.points[lo:hi])


def diameter(path, window=None):
    """Diameter of the whole path, or of a closed window of it."""
    if window is None:
        return point_set_diameter(path.points)
    return oscillation(path, window)


def hitting_time(path, radius):
    """First time |path(t)| reaches ``radius``, linearly interpolating |path|.

    Assumes the path starts at the origin.  Returns None when the radius is
    never reached by the sampled modulus.
    """
    if radius < 0:
        raise ValueError(f"radius must be nonnegative, got {radius}")
    norms = np.hypot(path.points[:, 0], path.points[:, 1])
    reached = np.nonzero(norms >= radius)[0]
    if len(reached) == 0:
        return None
    i = int(reached[0])
    if i == 0:
        return float(path.times[0])
    r0, r1 = norms[i - 1], norms[i]
    t0, t1 = path.times[i - 1], path.times[i]
    # Linear interpolation of the modulus between consecutive samples.
    frac = (radius - r0) / (r1 - r0)
    return float(t0 + frac * (t1 - t0))


def save_csv(path, filename):
    """Write ``t,x,y`` rows using shortest round-trip decimal representations."""
    with open(filename, "w", encoding="ascii") as fh:
        fh.write("t,x,y\n")
        for t, (x, y) in zip(path.times, path.points):
            fh.write(f"{float(t)!r},{float(x)!r},{float(y)!r}\n")


def load_csv(filename, label=""):
    """Read a path written by :func:`save_csv` (bit-exact round trip)."""
    times, xs, ys = [], [], []
    with open(filename, "r", encoding="ascii") as fh:
        header = fh.readline().strip()
        if header != "t,x,y":
            raise NonFiniteValue(f"unexpected CSV header {header!r}")
        for line in fh:
            line = line.strip()
            if not line:
                continue
            t, x, y = line.split(",")
            times.append(float(t))
            xs.append(float(x))
            ys.append(float(y))
    return make_path(np.array(times), np.column_stack([xs, ys]), label=label)
