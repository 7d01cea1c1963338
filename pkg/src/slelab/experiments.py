"""Monte Carlo experiment harness over simulated ensembles.

Ties simulation, content estimation, and the path functionals into
quantitative experiments:

* ``tail_fit`` — double-log tail-exponent fit of survival probabilities
  with a bootstrap confidence interval.
* ``crossing_time_experiment`` — frequency of fast annulus crossings
  P(tau_{r+r'} <= tau_r + budget) per r' and its decay rate.
* ``scaling_check`` — two-sample KS comparison of |X(lam t)| against
  lam^{1/d} |X(t)| (self-similarity of index 1/d).
* ``markov_lil_experiment`` — union frequencies of the large-increment
  events A_{eps,k} and shell events A_k driving the Markov-process lower
  bounds.
* ``regularity_pipeline`` — config-driven simulate/reparametrize/evaluate
  loop emitting one NDJSON row per path plus a CSV summary.
* ``*_study`` functions — the pinned ensemble experiments behind the
  acceptance suite, all deterministic functions of a master seed.

Every ensemble draws path i from the counter-based stream (master_seed, i),
so results are reproducible and independent of the worker count; the
``LAB_THREADS`` environment variable caps the thread pool.
"""

from __future__ import annotations

import concurrent.futures
import csv
import dataclasses
import json
import math
import os

import numpy as np
from scipy import stats as _scipy_stats

from . import content as content_mod
from . import functionals, gauges, loewner
from .errors import (
    ConfigError,
    InfiniteTimeChange,
    InsufficientHits,
    InsufficientSamples,
    InsufficientTailData,
    LabError,
)
from .paths import diameter, hitting_time
from .rng import BOOTSTRAP_OFFSET, stream

__all__ = [
    "ensemble_map",
    "TailFit",
    "tail_fit",
    "CrossingReport",
    "crossing_time_experiment",
    "ScalingReport",
    "scaling_check",
    "MarkovLilConfig",
    "MarkovLilResult",
    "bm_increment_sampler",
    "markov_lil_experiment",
    "ExperimentReport",
    "regularity_pipeline",
    "write_reports",
    "functional_gauge_from_spec",
    "gaussian_sup_tail_study",
    "brownian_lil_study",
    "taylor_variation_study",
    "slowdown_study",
    "vitali_study",
    "scaling_ks_study",
    "crossing_bm_study",
    "sle_content_study",
]


def lab_threads():
    """Worker cap from LAB_THREADS (defaults to 1; results never depend on it)."""
    raw = os.environ.get("LAB_THREADS", "").strip()
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError as exc:
        raise ConfigError(f"LAB_THREADS must be an integer, got {raw!r}") from exc


def ensemble_map(fn, count):
    """[fn(0), ..., fn(count-1)], possibly thread-parallel, always ordered.

    ``fn`` must be pure given its index (all randomness through
    counter-based streams keyed by the index), which makes the output
    independent of the worker count.
    """
    count = int(count)
    if count <= 0:
        return []
    workers = min(lab_threads(), count)
    if workers == 1:
        return [fn(i) for i in range(count)]
    with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, range(count)))


# ---------------------------------------------------------------------------
# Tail-exponent fitting


@dataclasses.dataclass(frozen=True)
class TailFit:
    """Survival-tail exponent fit: log(-log P(X >= r)) ~ slope * log r + b.

    ``used`` marks the grid points inside the fit window
    (survival within [5/n, 0.5]); ``ci95`` is the bootstrap 95% interval
    for the slope.
    """

    r_grid: np.ndarray
    survival: np.ndarray
    slope: float
    ci95: tuple
    n_samples: int
    used: np.ndarray


def _survival(sorted_samples, r_grid):
    n = len(sorted_samples)
    return (n - np.searchsorted(sorted_samples, r_grid, side="left")) / n


def _tail_slope(sorted_samples, r_grid, n):
    surv = _survival(sorted_samples, r_grid)
    used = (surv >= 5.0 / n) & (surv <= 0.5)
    if np.count_nonzero(used) < 4:
        return None, surv, used
    s = surv[used]
    x = np.log(r_grid[used])
    y = np.log(-np.log(s))
    # Delta method: Var log(-log Phat) = (1-P) / (n P log(P)^2).
    w = np.sqrt(n * s * np.log(s) ** 2 / (1.0 - s))
    slope = float(np.polyfit(x, y, 1, w=w)[0])
    return slope, surv, used


def tail_fit(samples, r_grid, min_samples=1000, n_boot=200, boot_seed=0):
    """Fit the tail exponent gamma of P(X >= r) ~ exp(-c r^gamma).

    Weighted least squares of log(-log Phat(r)) against log r, restricted
    to r with empirical survival in [5/n, 0.5] (rare-event noise and bulk
    curvature both bias the double-log slope outside that window).  The
    95% CI comes from ``n_boot`` bootstrap resamples on fixed counter-based
    streams.  Raises InsufficientTailData when fewer than ``min_samples``
    samples or fewer than 4 usable grid points remain.
    """
    samples = np.asarray(samples, dtype=np.float64)
    if samples.ndim != 1 or len(samples) < min_samples:
        raise InsufficientTailData(
            f"need at least {min_samples} samples, got {samples.shape}")
    if not np.all(np.isfinite(samples)):
        raise InsufficientTailData("samples contain NaN or infinity")
    r_grid = np.sort(np.asarray(r_grid, dtype=np.float64))
    n = len(samples)
    s_sorted = np.sort(samples)
    slope, surv, used = _tail_slope(s_sorted, r_grid, n)
    if slope is None:
        raise InsufficientTailData(
            f"only {int(np.count_nonzero(used))} grid points have survival "
            f"in [5/n, 0.5]; need 4")
    boots = []
    for b in range(n_boot):
        rng = stream(boot_seed, BOOTSTRAP_OFFSET + b)
        resampled = np.sort(s_sorted[rng.integers(0, n, n)])
        bs, _, _ = _tail_slope(resampled, r_grid, n)
        if bs is not None:
            boots.append(bs)
    if len(boots) >= max(10, n_boot // 4):
        ci = (float(np.percentile(boots, 2.5)),
              float(np.percentile(boots, 97.5)))
    else:
        ci = (-math.inf, math.inf)
    return TailFit(r_grid=r_grid, survival=surv, slope=slope, ci95=ci,
                   n_samples=n, used=used)


# ---------------------------------------------------------------------------
# Annulus crossing times


@dataclasses.dataclass(frozen=True)
class CrossingReport:
    """Fast-crossing frequencies P(tau_{r+r'} <= tau_r + budget) per r'.

    ``budget`` is ``l * r'`` in 'linear' mode (iterated-crossing form,
    decay exp(-c r')) or the constant ``l`` in 'fixed' mode (self-similar
    form, decay exp(-c r'^{d/(d-1)})).  ``decay_rate`` is the weighted
    slope of -log frequency against (r')^form over positive frequencies.
    """

    r: float
    l: float
    r_prime_grid: np.ndarray
    frequencies: np.ndarray
    n_valid: int
    decay_rate: float
    form: float
    budget: str


def crossing_time_experiment(ensemble, l, r, r_prime_grid, budget="linear",
                             form=1.0, min_hits=25):
    """Empirical annulus-crossing speed over an ensemble of paths.

    For each path with hitting time tau_r, and each r' in the grid, counts
    the event that radius r + r' was reached within ``l*r'`` ('linear') or
    ``l`` ('fixed') after tau_r; paths that never reach r + r' count as
    non-events.  Raises InsufficientHits when fewer than ``min_hits`` paths
    reach radius r.
    """
    if budget not in ("linear", "fixed"):
        raise ConfigError(f"budget must be 'linear' or 'fixed': {budget}")
    if not (l > 0.0 and r > 0.0):
        raise ConfigError(f"need l > 0 and r > 0, got l={l}, r={r}")
    r_primes = np.sort(np.asarray(r_prime_grid, dtype=np.float64))
    if np.any(r_primes <= 0.0):
        raise ConfigError("r' grid must be positive")
    tau_r = [hitting_time(p, r) for p in ensemble]
    valid = [i for i, t in enumerate(tau_r) if t is not None]
    if len(valid) < min_hits:
        raise InsufficientHits(
            f"only {len(valid)} of {len(ensemble)} paths reach radius {r}")
    freqs = np.zeros(len(r_primes))
    for j, rp in enumerate(r_primes):
        allowance = l * rp if budget == "linear" else l
        hits = 0
        for i in valid:
            tau2 = hitting_time(ensemble[i], r + rp)
            if tau2 is not None and tau2 <= tau_r[i] + allowance:
                hits += 1
        freqs[j] = hits / len(valid)
    pos = (freqs > 0.0) & (freqs < 1.0)
    if np.count_nonzero(pos) >= 2:
        x = r_primes[pos] ** form
        y = -np.log(freqs[pos])
        # Binomial-delta weights: Var(-log Phat) = (1-P)/(n P).
        w = np.sqrt(len(valid) * freqs[pos] / (1.0 - freqs[pos]))
        rate = float(np.polyfit(x, y, 1, w=w)[0])
    else:
        rate = math.nan
    return CrossingReport(r=float(r), l=float(l), r_prime_grid=r_primes,
                          frequencies=freqs, n_valid=len(valid),
                          decay_rate=rate, form=float(form), budget=budget)


# ---------------------------------------------------------------------------
# Self-similarity check


@dataclasses.dataclass(frozen=True)
class ScalingReport:
    """Two-sample KS comparison of |X(lam t)| with lam^(1/d) |X(t)|."""

    ks_stat: float
    p_value: float
    n_used: int
    lam: float
    d: float
    t_probe: float


def scaling_check(ensemble, lam, d, t_probe, min_paths=200):
    """KS test of self-similarity with index 1/d at one probe time.

    Evaluates |X(lam * t_probe)| and lam^(1/d) |X(t_probe)| on the same
    paths (so lam = 1 gives KS distance exactly 0) and applies the
    two-sample KS test.  Paths not covering both probe times are skipped;
    fewer than ``min_paths`` usable paths raises InsufficientSamples.
    """
    if not (lam > 0.0 and d > 0.0 and t_probe > 0.0):
        raise ConfigError("lam, d, t_probe must all be positive")
    a = []
    b = []
    t_hi = max(t_probe, lam * t_probe)
    for p in ensemble:
        if p.t0 > min(t_probe, lam * t_probe) or p.t1 < t_hi:
            continue
        x1 = np.interp(lam * t_probe, p.times, p.points[:, 0])
        y1 = np.interp(lam * t_probe, p.times, p.points[:, 1])
        x0 = np.interp(t_probe, p.times, p.points[:, 0])
        y0 = np.interp(t_probe, p.times, p.points[:, 1])
        a.append(math.hypot(x1, y1))
        b.append(lam ** (1.0 / d) * math.hypot(x0, y0))
    if len(a) < min_paths:
        raise InsufficientSamples(
            f"only {len(a)} paths cover both probe times; need {min_paths}")
    a_arr = np.asarray(a)
    b_arr = np.asarray(b)
    if np.array_equal(a_arr, b_arr):
        return ScalingReport(ks_stat=0.0, p_value=1.0, n_used=len(a),
                             lam=float(lam), d=float(d),
                             t_probe=float(t_probe))
    res = _scipy_stats.ks_2samp(a_arr, b_arr)
    return ScalingReport(ks_stat=float(res.statistic),
                         p_value=float(res.pvalue), n_used=len(a),
                         lam=float(lam), d=float(d), t_probe=float(t_probe))


# ---------------------------------------------------------------------------
# Markov-process large-increment events


@dataclasses.dataclass(frozen=True)
class MarkovLilConfig:
    """Parameters of the large-increment union/shell experiment.

    ``a0`` is the gauge amplitude (a free parameter swept by experiments;
    a0 = 1 puts the single-event probability at about sqrt(eps) for
    Brownian motion at d_w = 2), ``eps_list`` the increment scales, and
    shells run over e^-k for k = 2..k_max.
    """

    d_w: float
    a0: float
    eps_list: tuple
    runs: int
    k_max: int = 30

    def __post_init__(self):
        if not self.d_w > 1.0:
            raise ConfigError(f"d_w must exceed 1, got {self.d_w}")
        if not self.a0 >= 0.0:
            raise ConfigError(f"a0 must be nonnegative, got {self.a0}")
        eps = tuple(float(e) for e in self.eps_list)
        if not eps or any(not 0.0 < e < 1.0 for e in eps):
            raise ConfigError(f"eps_list must lie in (0, 1): {eps}")
        if self.runs < 1 or self.k_max < 2:
            raise ConfigError("need runs >= 1 and k_max >= 2")
        object.__setattr__(self, "eps_list", eps)
        object.__setattr__(self, "runs", int(self.runs))
        object.__setattr__(self, "k_max", int(self.k_max))


@dataclasses.dataclass(frozen=True)
class MarkovLilResult:
    """Union frequencies per eps and per-run dyadic-shell event counts."""

    config: MarkovLilConfig
    union_freq: np.ndarray
    shell_counts: np.ndarray
    monotone_in_eps: bool


def bm_increment_sampler(dim=1):
    """Sampler of exact Brownian increment distances over given durations."""
    dim = int(dim)

    def sampler(rng, durations):
        steps = rng.normal(0.0, 1.0, size=(len(durations), dim))
        steps *= np.sqrt(durations)[:, None]
        return np.hypot(steps[:, 0], steps[:, 1]) if dim == 2 \
            else np.abs(steps[:, 0])

    return sampler


def markov_lil_experiment(sampler, config, master_seed=0):
    """Frequencies of the union of large-increment events, plus shell counts.

    Per run and per eps, the event A_{eps,k} asks whether the k-th
    increment over a grid of step eps reaches
    a0 * eps^(1/d_w) * (log 1/eps)^(1-1/d_w); the union runs over the
    floor(1/eps) grid steps in [0, 1].  Shell events A_k do the same over
    [e^-(k+1), e^-k] with amplitude a0 * e^(-k/d_w) * (log k)^(1-1/d_w).
    ``sampler(rng, durations)`` must return exact increment distances.
    """
    cfg = config
    inv = 1.0 / cfg.d_w
    shell_ks = np.arange(2, cfg.k_max + 1)
    shell_durations = np.exp(-shell_ks.astype(np.float64)) * (1.0 - math.exp(-1.0))
    shell_thresholds = (cfg.a0 * np.exp(-shell_ks * inv)
                        * np.log(shell_ks) ** (1.0 - inv))

    def one_run(i):
        rng = stream(master_seed, i)
        unions = np.zeros(len(cfg.eps_list), dtype=bool)
        for j, eps in enumerate(cfg.eps_list):
            k = int(math.floor(1.0 / eps))
            thr = cfg.a0 * eps ** inv * math.log(1.0 / eps) ** (1.0 - inv)
            dists = sampler(rng, np.full(k, eps))
            unions[j] = bool(np.any(dists >= thr))
        shell_d = sampler(rng, shell_durations)
        return unions, int(np.count_nonzero(shell_d >= shell_thresholds))

    results = ensemble_map(one_run, cfg.runs)
    union_mat = np.array([u for u, _ in results])
    shell_counts = np.array([c for _, c in results], dtype=np.int64)
    union_freq = union_mat.mean(axis=0)
    order = np.argsort(cfg.eps_list)[::-1]  # decreasing eps
    monotone = bool(np.all(np.diff(union_freq[order]) >= 0.0))
    return MarkovLilResult(config=cfg, union_freq=union_freq,
                           shell_counts=shell_counts,
                           monotone_in_eps=monotone)


# ---------------------------------------------------------------------------
# Config-driven pipeline


def functional_gauge_from_spec(spec):
    """Build a vectorized gauge callable from a small named-spec dict.

    Kinds: ``sle_psi``/``sle_moc``/``sle_lil`` (dimension-d sharp gauges,
    key ``d``), ``bm_lil`` (sqrt(2 t loglog* 1/t)), ``power`` (x^p, key
    ``p``), ``taylor`` (x^2 / (2 loglog* 1/x)).
    """
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ConfigError(f"gauge spec must be a dict with 'kind': {spec!r}")
    kind = spec["kind"]
    if kind == "sle_psi":
        d = float(spec["d"])
        return lambda x: gauges.psi_variation_gauge(x, d)
    if kind == "sle_moc":
        d = float(spec["d"])
        return lambda s: gauges.moc_gauge(s, d)
    if kind == "sle_lil":
        d = float(spec["d"])
        return lambda t: gauges.lil_gauge(t, d)
    if kind == "bm_lil":
        return lambda t: np.sqrt(
            2.0 * np.asarray(t, dtype=np.float64)
            * gauges.log_star(gauges.log_star(1.0 / np.asarray(t, dtype=np.float64))))
    if kind == "power":
        p = float(spec["p"])
        return lambda x: np.asarray(x, dtype=np.float64) ** p
    if kind == "taylor":
        def taylor(x):
            x = np.asarray(x, dtype=np.float64)
            return x * x / (2.0 * gauges.log_star(gauges.log_star(1.0 / x)))
        return taylor
    raise ConfigError(f"unknown gauge kind {kind!r}")


def _simulate_from_config(proc, seed_pair):
    kind = proc.get("kind")
    if kind == "bm":
        return loewner.sample_bm(dim=int(proc.get("dim", 1)),
                                 T=float(proc.get("T", 1.0)),
                                 n=int(proc.get("n", 4096)),
                                 seed=seed_pair)
    if kind == "sle":
        drv = loewner.sample_driving(kappa=float(proc["kappa"]),
                                     rhos=proc.get("rhos", ()),
                                     u0=proc.get("u0", ()),
                                     T=float(proc.get("T", 1.0)),
                                     dt=float(proc.get("dt", 1e-4)),
                                     seed=seed_pair)
        cfg = loewner.TraceConfig(n_points=int(proc.get("n_points", 1024)))
        return loewner.trace_from_driving(drv, cfg)
    raise ConfigError(f"unknown process kind {kind!r}")


def _evaluate_functional(path, fspec):
    kind = fspec.get("kind")
    if kind == "psivar":
        psi = functional_gauge_from_spec(fspec["gauge"])
        res = functionals.psi_variation_sum(path, psi,
                                            float(fspec.get("delta", math.inf)))
        return {"value": res.value,
                "partition_size": int(len(res.optimal_partition))}
    if kind == "seminorm":
        psi = functional_gauge_from_spec(fspec["gauge"])
        val = functionals.psi_variation_seminorm(
            path, psi, float(fspec.get("delta", math.inf)))
        return {"value": float(val)}
    if kind == "moc":
        omega = functional_gauge_from_spec(fspec["gauge"])
        val = functionals.moc_ratio(path, omega,
                                    float(fspec.get("delta", math.inf)))
        return {"value": float(val)}
    if kind == "lil":
        gauge = functional_gauge_from_spec(fspec["gauge"])
        res = functionals.lil_statistic(path, gauge,
                                        int(fspec.get("k_min", 3)),
                                        int(fspec.get("k_max", 16)),
                                        direction=fspec.get("direction",
                                                            "zero"))
        return {"value": res.overall,
                "nonempty_shells": int(np.count_nonzero(res.shell_counts))}
    raise ConfigError(f"unknown functional kind {kind!r}")


@dataclasses.dataclass(frozen=True)
class ExperimentReport:
    """Pipeline output: one row per path plus aggregate summary rows."""

    rows: tuple
    summary: tuple
    ndjson_path: str
    csv_path: str


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    # bool before int: Python bool subclasses int and must stay boolean.
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    return obj


def _csv_cell(value):
    if isinstance(value, (np.floating, float)):
        return repr(float(value))
    if isinstance(value, (np.integer, int, np.bool_, bool)):
        return str(_jsonable(value))
    return str(value)


def write_reports(rows, summary, out_dir):
    """Write report.ndjson (one object per row) and summary.csv.

    Both files are deterministic functions of their inputs: NDJSON objects
    use sorted keys and shortest-roundtrip float reprs; the CSV header is
    the union of summary keys in first-seen order.
    """
    os.makedirs(out_dir, exist_ok=True)
    ndjson_path = os.path.join(out_dir, "report.ndjson")
    with open(ndjson_path, "w") as fh:
        for row in rows:
            fh.write(json.dumps(_jsonable(row), sort_keys=True) + "\n")
    fields = []
    for s in summary:
        for key in s:
            if key not in fields:
                fields.append(key)
    csv_path = os.path.join(out_dir, "summary.csv")
    with open(csv_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(fields)
        for s in summary:
            writer.writerow([_csv_cell(s[k]) if k in s else "" for k in fields])
    return ndjson_path, csv_path


def regularity_pipeline(config, master_seed=0, out_dir="."):
    """Simulate an ensemble, evaluate functionals per path, emit reports.

    ``config`` needs ``process`` (see ``_simulate_from_config``),
    ``n_samples``, and ``functionals`` (list of functional specs, each
    with a ``name``); optional ``natural_param`` runs every path through
    the content pipeline at default resolution first (key ``d`` required).
    Writes ``report.ndjson`` (one object per path, ordered by index) and
    ``summary.csv`` (median and quartiles per functional); both are
    deterministic functions of (config, master_seed).  Component errors
    abort the run, tagged with the failing path's seed.
    """
    if not isinstance(config, dict):
        raise ConfigError("config must be a mapping")
    for key in ("process", "n_samples", "functionals"):
        if key not in config:
            raise ConfigError(f"config is missing {key!r}")
    fspecs = list(config["functionals"])
    for fs in fspecs:
        if "name" not in fs:
            raise ConfigError(f"functional spec has no name: {fs!r}")
    n_samples = int(config["n_samples"])
    natural = bool(config.get("natural_param", False))

    def one_path(i):
        seed_pair = (master_seed, i)
        try:
            path = _simulate_from_config(config["process"], seed_pair)
            if natural:
                scale = diameter(path)
                eps, grid_h = content_mod.default_resolution(scale)
                profile = content_mod.content_profile(
                    path, float(config["d"]), eps, grid_h)
                path = content_mod.natural_reparametrize(path, profile)
            row = {"sample": i, "seed": list(seed_pair)}
            for fs in fspecs:
                row[fs["name"]] = _evaluate_functional(path, fs)
            return row
        except LabError as exc:
            # Same class, so config mistakes keep reading as config
            # mistakes at the CLI boundary.
            raise type(exc)(f"path seed {seed_pair}: {exc}") from exc

    rows = ensemble_map(one_path, n_samples)
    summary = []
    for fs in fspecs:
        vals = np.array([row[fs["name"]]["value"] for row in rows], dtype=np.float64)
        if len(vals):
            summary.append({"metric": fs["name"],
                            "median": float(np.median(vals)),
                            "q1": float(np.percentile(vals, 25)),
                            "q3": float(np.percentile(vals, 75)),
                            "n": int(len(vals))})
        else:
            summary.append({"metric": fs["name"], "median": math.nan,
                            "q1": math.nan, "q3": math.nan, "n": 0})
    ndjson_path, csv_path = write_reports(rows, summary, out_dir)
    return ExperimentReport(rows=tuple(rows), summary=tuple(summary),
                            ndjson_path=ndjson_path, csv_path=csv_path)


# ---------------------------------------------------------------------------
# Pinned ensemble studies (the acceptance experiments)


def gaussian_sup_tail_study(n_samples=200_000, n_steps=4096, master_seed=0,
                            r_grid=None, block=512):
    """Tail fit of sup over [0,1] of |B| for 1D Brownian motion.

    The reflection principle gives survival ~ 4(1 - Phi(r)) up to
    alternating corrections, so the double-log slope is 2.
    """
    n_blocks = (n_samples + block - 1) // block

    def one_block(bi):
        count = min(block, n_samples - bi * block)
        rng = stream(master_seed, bi)
        steps = rng.normal(0.0, math.sqrt(1.0 / n_steps),
                           size=(count, n_steps))
        np.cumsum(steps, axis=1, out=steps)
        return np.max(np.abs(steps), axis=1)

    sups = np.concatenate(ensemble_map(one_block, n_blocks))
    if r_grid is None:
        r_grid = np.linspace(1.5, 3.5, 13)
    return tail_fit(sups, r_grid, boot_seed=master_seed)


def brownian_lil_study(n_paths=200, n_steps=2 ** 20, k_min=3, k_max=20,
                       master_seed=0):
    """Ensemble of LIL statistics of 1D BM against sqrt(2 t loglog* (1/t)).

    The classical iterated-logarithm constant makes the overall shell
    maximum concentrate near 1.
    """
    gauge = functional_gauge_from_spec({"kind": "bm_lil"})

    def one_path(i):
        path = loewner.sample_bm(dim=1, T=1.0, n=n_steps,
                                 seed=(master_seed, i))
        return functionals.lil_statistic(path, gauge, k_min, k_max)

    results = ensemble_map(one_path, n_paths)
    overall = np.array([r.overall for r in results])
    shell_max = np.array([r.shell_max for r in results])
    return {"overall": overall,
            "median": float(np.median(overall)),
            "ks": results[0].ks,
            "shell_medians": np.nanmedian(shell_max, axis=0)}


def taylor_variation_study(n_paths=50, n_steps=2 ** 16, k_lo=8, k_hi=14,
                           master_seed=0):
    """Per-mesh psi-variation medians of BM for three variation gauges.

    Returns medians[name][j] for mesh delta = 2^-k, k = k_lo..k_hi, with
    the Taylor gauge x^2/(2 loglog* 1/x) (variation converges to |I|)
    and the pure powers x^2.2 and x^1.8.
    """
    specs = {"taylor": {"kind": "taylor"},
             "power2.2": {"kind": "power", "p": 2.2},
             "power1.8": {"kind": "power", "p": 1.8}}
    ks = list(range(k_lo, k_hi + 1))

    def one_path(i):
        path = loewner.sample_bm(dim=1, T=1.0, n=n_steps,
                                 seed=(master_seed, i))
        out = {}
        for name, gspec in specs.items():
            psi = functional_gauge_from_spec(gspec)
            out[name] = [functionals.psi_variation_sum(
                path, psi, 2.0 ** (-k)).value for k in ks]
        return out

    rows = ensemble_map(one_path, n_paths)
    medians = {name: np.median(np.array([row[name] for row in rows]), axis=0)
               for name in specs}
    return {"ks": np.array(ks), "medians": medians, "n_paths": n_paths}


def slowdown_study(n_paths=100, n_steps=2 ** 16, k_max=14, delta=math.inf,
                   master_seed=0, audit_paths=3, include_raw=False):
    """Slowdown certificates on a BM ensemble with the LIL-shape gauge.

    sigma(t) = t^(1/2) (log* log* 1/t)^(1/2), the exponential-family sharp
    modulus at alpha = 1/2, beta = 2.  Per path, M doubles from 1 until
    the slowdown construction succeeds (no InfiniteTimeChange); the
    variation bound is B = M (2^alpha + 1) T(1)^alpha.  The seminorm
    inequality [X]_{psi-var} <= B (psi = sigma^-1) is certified by one
    feasibility DP: ``feasibility`` = max over partitions of
    sum psi(|dX| / B), which is <= 1 exactly when the seminorm is <= B.
    The modulus margin uses all pairs on the first ``audit_paths`` paths
    and logarithmic lag classes elsewhere.  ``include_raw`` additionally
    reports the unnormalized sum psi(|dX|), which the seminorm bound does
    not control.
    """
    sigma = lambda t: gauges.lil_gauge(t, 2.0)
    psi = lambda x: gauges.invert_monotone(sigma, x)

    def one_path(i):
        path = loewner.sample_bm(dim=1, T=1.0, n=n_steps,
                                 seed=(master_seed, i))
        M = 1.0
        res = None
        for _ in range(40):
            try:
                res = functionals.slowdown_reparam(
                    path, sigma, M=M, alpha=0.5, k_max=k_max,
                    check_pairs="all" if i < audit_paths else "lags")
                break
            except InfiniteTimeChange:
                M *= 2.0
        if res is None:
            raise InsufficientSamples(
                f"slowdown calibration failed for path {i}")
        bound = res.variation_bound
        feas = functionals.psi_variation_sum(
            path, lambda x: psi(np.asarray(x) / bound), delta).value
        row = {"M": res.M, "T1": res.total_time, "bound": bound,
               "feasibility": feas, "margin": res.modulus_margin}
        if include_raw:
            row["raw_sum"] = functionals.psi_variation_sum(
                path, psi, delta).value
        return row

    rows = ensemble_map(one_path, n_paths)
    return {"rows": rows,
            "all_bounded": bool(all(r["feasibility"] <= 1.0 for r in rows)),
            "min_margin": float(min(r["margin"] for r in rows))}


def vitali_study(n_paths=100, n_steps=2 ** 18, c=0.25, s_max=2.0 ** -6,
                 master_seed=0):
    """Vitali extraction coverage on BM with a sub-critical LIL gauge.

    sigma(t) = sqrt(2 c t loglog*(1/t)) with c < 1 sits below the LIL
    envelope, so greedy extraction covers most of [0, 1].
    """
    def sigma(t):
        t = np.asarray(t, dtype=np.float64)
        return np.sqrt(2.0 * c * t * gauges.log_star(gauges.log_star(1.0 / t)))

    def one_path(i):
        path = loewner.sample_bm(dim=1, T=1.0, n=n_steps,
                                 seed=(master_seed, i))
        res = functionals.vitali_extract(path, sigma, eps=s_max, s_max=s_max)
        return {"coverage": res.covered_length,
                "gauge_sum": res.gauge_sum,
                "consistent": bool(res.gauge_sum >= res.covered_length)}

    rows = ensemble_map(one_path, n_paths)
    coverages = np.array([r["coverage"] for r in rows])
    return {"rows": rows, "coverages": coverages,
            "frac_above_0.9": float(np.mean(coverages >= 0.9)),
            "all_consistent": bool(all(r["consistent"] for r in rows))}


def scaling_ks_study(n_paths=1000, lam=4.0, d=2.0, t_probe=0.2,
                     n_steps=4096, master_seed=0):
    """Self-similarity KS check on a 1D BM ensemble (index 1/2)."""
    def one_path(i):
        return loewner.sample_bm(dim=1, T=1.0, n=n_steps,
                                 seed=(master_seed, i))

    ensemble = ensemble_map(one_path, n_paths)
    return scaling_check(ensemble, lam=lam, d=d, t_probe=t_probe)


def crossing_bm_study(n_paths=400, l=0.5, r=0.5, r_primes=(0.25, 0.5, 0.75, 1.0),
                      n_steps=2 ** 14, T=8.0, budget="fixed", form=2.0,
                      master_seed=0):
    """Crossing-speed decay for 1D BM (fixed budget: Gaussian r'^2 decay)."""
    def one_path(i):
        return loewner.sample_bm(dim=1, T=T, n=n_steps,
                                 seed=(master_seed, i))

    ensemble = ensemble_map(one_path, n_paths)
    return crossing_time_experiment(ensemble, l=l, r=r,
                                    r_prime_grid=r_primes, budget=budget,
                                    form=form)


def sle_content_study(n_traces=500, kappa=8.0 / 3.0, dt=1e-5,
                      trace_points=4096, master_seed=0,
                      radius_fracs=(0.4, 0.6, 0.9),
                      eps_fracs=(0.05, 0.1, 0.2, 0.4),
                      radius_quantile=5.0, tail_r_index=1):
    """Minkowski-content scaling of SLE_kappa traces stopped at radii.

    Simulates ``n_traces`` capacity-parametrized traces on [0, 1], picks
    radii as fractions of a low ensemble quantile of the final modulus
    (so nearly every trace reaches every radius), estimates
    Cont(eta[0, tau_r]) per radius by rasterization at eps = eps_fracs * r,
    and fits log median content against log radius; the slope estimates
    the trace dimension d = 1 + kappa/8.  Also reports the lower-tail fit
    of 1/Cont at the ``tail_r_index``-th radius (exponent 1/(d-1)).
    """
    d = gauges.trace_dimension(kappa)

    def one_trace(i):
        drv = loewner.sample_driving(kappa=kappa, T=1.0, dt=dt,
                                     seed=(master_seed, i))
        cfg = loewner.TraceConfig(dt=dt, n_points=trace_points)
        return loewner.trace_from_driving(drv, cfg)

    traces = ensemble_map(one_trace, n_traces)
    max_mod = np.array([float(np.hypot(p.points[:, 0], p.points[:, 1]).max())
                        for p in traces])
    scale = float(np.percentile(max_mod, radius_quantile))
    radii = np.array(radius_fracs, dtype=np.float64) * scale
    contents = np.full((len(traces), len(radii)), np.nan)
    for ti, path in enumerate(traces):
        mods = np.hypot(path.points[:, 0], path.points[:, 1])
        for ri, r in enumerate(radii):
            hit = np.nonzero(mods >= r)[0]
            if not len(hit):
                continue
            pts = path.points[:int(hit[0]) + 1]
            eps = np.asarray(eps_fracs) * r
            contents[ti, ri] = content_mod.minkowski_content(
                pts, d, eps, float(eps.min()) / 8.0)
    ok = ~np.isnan(contents)
    n_ok = ok.all(axis=1).sum()
    if n_ok < max(10, n_traces // 2):
        raise InsufficientHits(
            f"only {n_ok} of {n_traces} traces reach every radius")
    med = np.array([np.median(contents[ok[:, ri], ri])
                    for ri in range(len(radii))])
    slope = float(np.polyfit(np.log(radii), np.log(med), 1)[0])
    inv_content = 1.0 / contents[ok[:, tail_r_index], tail_r_index]
    tail = None
    try:
        grid = np.geomspace(np.percentile(inv_content, 55),
                            np.percentile(inv_content, 99.5), 12)
        tail = tail_fit(inv_content, grid, min_samples=min(100, len(inv_content)),
                        boot_seed=master_seed)
    except InsufficientTailData:
        pass
    return {"d": d, "radii": radii, "contents": contents,
            "medians": med, "slope": slope, "tail": tail,
            "scale": scale, "n_traces": n_traces}
