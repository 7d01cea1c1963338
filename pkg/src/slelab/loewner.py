"""Chordal Loewner evolutions: driving processes and discrete traces.

The driving function W solves

    dW = sqrt(kappa) dB + sum_j rho_j / (W - U^j) dt,
    dU^j = 2 / (U^j - W) dt,

with W(0) = 0.  The trace is reconstructed by composing the inverse
vertical-slit maps of the discretized evolution: step j with capacity
increment delta_j and right-endpoint driving value xi_j contributes

    f_j(z) = xi_j + sqrt((z - xi_j)^2 - 4 delta_j),

branch-corrected into the upper half-plane, and the trace point at capacity
time t_k is (f_1 o ... o f_k)(xi_k + i eps_tip).

For a single force point the gap V = |W - U| is an autonomous Bessel-type
diffusion of dimension delta = 1 + 2(rho + 2)/kappa, and each step draws its
exact noncentral-chi-square transition; this stays positive for any step
size and gives the exact first-step law from one-sided seeds u0 = 0+-.
Multiple force points fall back to Euler-Maruyama with 16x substepping near
collisions.
"""
import math
from dataclasses import dataclass

import numpy as np

from .errors import (BranchError, ForcePointCollision, LengthMismatch,
                     NonFiniteValue, NonMonotoneTimes, OutOfDomain)
from .kernels import trace_compose
from .paths import SampledPath, diameter, make_path
from .rng import stream


@dataclass(frozen=True)
class TraceConfig:
    """Discretization knobs for trace extraction.

    ``tip_refinement`` is the imaginary lift eps_tip of the innermost
    evaluation point; None selects dt**0.6, which balances the O(eps^2/t)
    tip bias against evaluating ever closer to the boundary singularity.
    ``n_points`` output samples are placed by ``spacing``: "sqrt" puts
    t_i = T (i/m)^2 (uniform in the trace's spatial scale), "uniform" is
    uniform in capacity time.  The final step is always included.
    """

    dt: float = 1e-5
    substeps: int = 16
    tip_refinement: float = None
    n_points: int = 1024
    spacing: str = "sqrt"

    def __post_init__(self):
        if not self.dt > 0.0:
            raise OutOfDomain(f"dt must be positive, got {self.dt}")
        if not (isinstance(self.substeps, int) and self.substeps >= 1):
            raise OutOfDomain(f"substeps must be a positive integer, got {self.substeps}")
        if self.tip_refinement is not None and not self.tip_refinement > 0.0:
            raise OutOfDomain("tip_refinement must be positive when given")
        if self.n_points < 1:
            raise OutOfDomain("n_points must be at least 1")
        if self.spacing not in ("sqrt", "uniform"):
            raise OutOfDomain(f"unknown spacing {self.spacing!r}")

    def eps_tip(self):
        return self.dt ** 0.6 if self.tip_refinement is None else self.tip_refinement


@dataclass(frozen=True)
class DrivingPath:
    """Discretized driving function and force points at step boundaries.

    ``w`` has one more entry than ``step_durations`` (values at step
    boundaries, starting from W(0) = 0); ``u`` has shape (n_force, n+1).
    """

    step_durations: np.ndarray
    w: np.ndarray
    u: np.ndarray
    kappa: float
    rhos: tuple
    seed: object = None

    def __post_init__(self):
        dur = np.ascontiguousarray(self.step_durations, dtype=np.float64)
        w = np.ascontiguousarray(self.w, dtype=np.float64)
        u = np.ascontiguousarray(self.u, dtype=np.float64)
        if u.ndim == 1:
            u = u.reshape(1, -1) if len(self.rhos) else u.reshape(0, len(w))
        if len(w) != len(dur) + 1:
            raise LengthMismatch(f"{len(w)} driving values for {len(dur)} steps")
        if u.shape != (len(self.rhos), len(w)):
            raise LengthMismatch(
                f"force-point array shape {u.shape} != ({len(self.rhos)}, {len(w)})")
        if np.any(dur <= 0.0):
            raise NonMonotoneTimes("step durations must be positive")
        if not (np.all(np.isfinite(dur)) and np.all(np.isfinite(w))
                and np.all(np.isfinite(u))):
            raise NonFiniteValue("driving data contains non-finite entries")
        if not self.kappa > 0.0:
            raise OutOfDomain(f"kappa must be positive, got {self.kappa}")
        # A single force point must stay on its starting side of the driving.
        if len(self.rhos) == 1:
            side = _force_side(float(u[0, 0]), float(w[0]))
            if np.any(side * (w - u[0]) < 0.0):
                raise ForcePointCollision("force point crossed the driving function")
        for arr in (dur, w, u):
            arr.setflags(write=False)
        object.__setattr__(self, "step_durations", dur)
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "rhos", tuple(float(r) for r in self.rhos))

    @property
    def n_steps(self):
        return len(self.step_durations)

    @property
    def total_capacity(self):
        return float(np.sum(self.step_durations))

    def boundary_times(self):
        return np.concatenate([[0.0], np.cumsum(self.step_durations)])


def _bessel_dimension(kappa, rho):
    return 1.0 + 2.0 * (rho + 2.0) / kappa


def _force_side(u0, w0):
    """+1 when the force point sits (weakly) left of the driving, else -1.

    A coinciding start is disambiguated by the sign bit: u0 = -0.0 means
    "attached from the left", +0.0 "from the right".
    """
    if u0 == w0:
        return 1.0 if np.signbit(u0 - w0) or np.signbit(u0) else -1.0
    return 1.0 if u0 < w0 else -1.0


def _sample_driving_single(kappa, rho, u0, n, dt, rng, substeps):
    """Exact Bessel-gap scheme for one force point."""
    delta = _bessel_dimension(kappa, rho)
    if delta <= 0.0:
        raise OutOfDomain(
            f"rho = {rho} gives Bessel dimension {delta} <= 0; unsupported")
    side = _force_side(u0, 0.0)
    w = np.empty(n + 1)
    u = np.empty(n + 1)
    w[0] = 0.0
    u[0] = float(u0)
    v = abs(float(u0)) / math.sqrt(kappa)  # gap in Bessel scale
    gap_floor = math.sqrt(dt)
    for k in range(n):
        m = substeps if v * math.sqrt(kappa) < gap_floor else 1
        h = dt / m
        du = 0.0
        for _ in range(m):
            # Exact BESQ(delta) transition: V^2/h ~ noncentral chi^2.
            v_new = math.sqrt(h * rng.noncentral_chisquare(delta, v * v / h))
            if v_new == 0.0:
                raise ForcePointCollision(f"gap vanished at step {k}")
            # Force-point ODE dU = -side * 2/(sqrt(kappa) V) dt: trapezoid,
            # except from an exact zero where the square-root bridge
            # V(s) ~ v_new sqrt(s/h) gives int ds/V = 2h/v_new.
            if v == 0.0:
                du -= side * 4.0 * h / (v_new * math.sqrt(kappa))
            else:
                du -= side * h * (1.0 / v + 1.0 / v_new) / math.sqrt(kappa)
            v = v_new
        u[k + 1] = u[k] + du
        w[k + 1] = u[k + 1] + side * math.sqrt(kappa) * v
    return w, u.reshape(1, -1)


def _sample_driving_multi(kappa, rhos, u0s, n, dt, rng, substeps):
    """Euler-Maruyama with substepping near any force point."""
    m = len(rhos)
    w = np.empty(n + 1)
    u = np.empty((m, n + 1))
    w[0] = 0.0
    u[:, 0] = u0s
    if np.any(u0s == 0.0):
        raise ForcePointCollision(
            "one-sided zero seeds are only supported for a single force point")
    cur_w = 0.0
    cur_u = np.array(u0s, dtype=np.float64)
    sq = math.sqrt(kappa)
    # Substep whenever one macro step's noise scale is comparable to the
    # smallest gap, and keep halving until the substep noise is well inside
    # it (capped; a genuinely vanishing gap still collides, as it should).
    gap_floor = 4.0 * math.sqrt(kappa * dt)
    max_sub = max(substeps, 1) * 64
    rhos_arr = np.asarray(rhos, dtype=np.float64)
    signs0 = np.sign(cur_u - cur_w)
    for k in range(n):
        gap_min = float(np.min(np.abs(cur_w - cur_u)))
        sub = 1
        if gap_min < gap_floor:
            sub = max(substeps, 1)
            while sub < max_sub and 4.0 * math.sqrt(kappa * dt / sub) > gap_min:
                sub *= 2
        h = dt / sub
        for _ in range(sub):
            gaps = cur_w - cur_u
            if np.any(gaps == 0.0):
                raise ForcePointCollision(f"force point collision at step {k}")
            drift = float(np.sum(rhos_arr / gaps))
            cur_w = cur_w + sq * rng.normal(0.0, math.sqrt(h)) + drift * h
            cur_u = cur_u - 2.0 * h / gaps
            if np.any(np.sign(cur_u - cur_w) != signs0):
                raise ForcePointCollision(
                    f"force point crossed the driving at step {k}")
        w[k + 1] = cur_w
        u[:, k + 1] = cur_u
    return w, u


def sample_driving(kappa, rhos=(), u0=(), T=1.0, dt=1e-5, seed=0, substeps=16):
    """Sample a driving path on [0, T] with n = round(T/dt) equal steps.

    ``rhos`` and ``u0`` list the force-point weights and initial positions;
    a single force point may be seeded at 0+ or 0- via signed zero.  With no
    force points W is the exact scaled random walk (Var W_T = kappa T).
    ``seed`` is either an integer or a (master_seed, sample_index) pair.
    """
    if not kappa > 0.0:
        raise OutOfDomain(f"kappa must be positive, got {kappa}")
    if not (T > 0.0 and dt > 0.0):
        raise OutOfDomain("need T > 0 and dt > 0")
    rhos = tuple(float(r) for r in np.atleast_1d(rhos))
    u0s = np.atleast_1d(np.asarray(u0, dtype=np.float64))
    if len(rhos) != len(u0s):
        raise LengthMismatch(f"{len(rhos)} rhos vs {len(u0s)} force-point seeds")
    n = max(int(round(T / dt)), 1)
    dt_eff = T / n
    key = seed if isinstance(seed, tuple) else (seed, 0)
    rng = stream(*key)
    if len(rhos) == 0:
        incs = rng.normal(0.0, math.sqrt(kappa * dt_eff), size=n)
        w = np.concatenate([[0.0], np.cumsum(incs)])
        u = np.zeros((0, n + 1))
    elif len(rhos) == 1:
        w, u = _sample_driving_single(kappa, rhos[0], float(u0s[0]), n, dt_eff,
                                      rng, substeps)
    else:
        w, u = _sample_driving_multi(kappa, rhos, u0s, n, dt_eff, rng, substeps)
    return DrivingPath(step_durations=np.full(n, dt_eff), w=w, u=u,
                       kappa=kappa, rhos=rhos, seed=key)


def _output_steps(n, config):
    m = min(config.n_points, n)
    i = np.arange(1, m + 1, dtype=np.float64)
    if config.spacing == "sqrt":
        ks = np.round(n * (i / m) ** 2)
    else:
        ks = np.round(n * i / m)
    ks = np.unique(np.clip(ks, 1, n).astype(np.int64))
    if ks[-1] != n:
        ks = np.append(ks, n)
    return ks


def trace_from_driving(driving, config=TraceConfig()):
    """Extract the trace of a driving path at the configured output times.

    Output sample k is the composed inverse slit map evaluated at the lifted
    tip of step k; its time is the capacity time of that step boundary.
    Raises BranchError (with the output index) if an evaluation leaves the
    closed upper half-plane or stops being finite.
    """
    xi = driving.w[1:]
    a = 2.0 * np.sqrt(driving.step_durations)
    ks = _output_steps(driving.n_steps, config)
    z = trace_compose(xi, a, ks, config.eps_tip())
    bad = ~np.isfinite(z) | (z.imag < 0.0)
    if np.any(bad):
        first = int(np.nonzero(bad)[0][0])
        raise BranchError(
            f"trace evaluation left the upper half-plane at output {first}",
            step_index=first)
    times = driving.boundary_times()[ks]
    pts = np.column_stack([z.real, z.imag])
    return SampledPath(times, pts, label=f"loewner kappa={driving.kappa:g}")


def sample_bm(dim, T, n, seed=0):
    """Brownian motion on [0, T] from n exact Gaussian increments.

    Returns n+1 samples starting at the origin; each coordinate increment
    has variance T/n.  ``dim`` is 1 or 2 (1-d paths embed with y = 0).
    """
    if dim not in (1, 2):
        raise OutOfDomain(f"dim must be 1 or 2, got {dim}")
    if not (T > 0.0 and isinstance(n, (int, np.integer)) and n >= 1):
        raise OutOfDomain("need T > 0 and integer n >= 1")
    key = seed if isinstance(seed, tuple) else (seed, 0)
    rng = stream(*key)
    incs = rng.normal(0.0, math.sqrt(T / n), size=(int(n), dim))
    pts = np.zeros((int(n) + 1, 2))
    pts[1:, :dim] = np.cumsum(incs, axis=0)
    times = np.linspace(0.0, T, int(n) + 1)
    return SampledPath(times, pts, label=f"bm dim={dim}")


def interior_segment(path, capacity_frac=0.10, axis_margin_frac=0.10):
    """Bulk sub-path: drop early capacity time and near-boundary samples.

    Removes samples with t < capacity_frac * t_max and samples closer to the
    real axis than axis_margin_frac times the path diameter, eliminating the
    two regions where half-plane boundary effects distort local regularity
    statistics.
    """
    diam = diameter(path)
    keep = (path.times >= capacity_frac * path.times[-1]) \
        & (path.points[:, 1] >= axis_margin_frac * diam)
    if not np.any(keep):
        raise OutOfDomain("interior segment is empty for this path")
    return SampledPath(path.times[keep], path.points[keep], path.label)
