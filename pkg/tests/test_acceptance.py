"""Published-scale validation runs for the whole laboratory.

Each test exercises one end-to-end claim: exact oracle equality for the
partition DP, closed-form and equivariance checks for the Loewner solver,
exponent recovery against analytically known Brownian tails, the
certified slowdown/variation inequalities, Vitali coverage, SLE content
scaling, self-similarity, the gauge condition suite, and byte-level
determinism under thread parallelism.

Long ensembles default to reduced sizes; set SLELAB_ACCEPT_FULL=1 to run
the published parameters (adds tens of minutes).  Three tests document
known quantitative gaps and fail honestly at any scale: the Brownian LIL
ensemble median sits above its asymptotic band at reachable resolutions,
the Taylor-gauge per-mesh medians are still converging (spread > 25%),
and the subcritical-power variation statistic decreases with mesh
refinement (feasible partitions only gain options as the mesh loosens,
so the finest mesh can never dominate) instead of increasing.
"""

import itertools
import json
import math
import os

import numpy as np
import pytest

from slelab import content as content_mod
from slelab import experiments as ex
from slelab import functionals, gauges, loewner
from slelab.paths import make_path
from slelab.rng import stream

FULL = bool(os.environ.get("SLELAB_ACCEPT_FULL"))


# ---------------------------------------------------------------------------
# partition DP vs exhaustive enumeration


def _exhaustive_variation(times, pts, psi, delta):
    """Max of sum psi(|dX|) over all subchains with steps inside (0, delta)."""
    n = len(times)
    best = 0.0
    for size in range(2, n + 1):
        for chain in itertools.combinations(range(n), size):
            dts = np.diff(times[list(chain)])
            if np.any(dts <= 0.0) or np.any(dts >= delta):
                continue
            d = np.diff(pts[list(chain)], axis=0)
            best = max(best, float(np.sum(np.hypot(d[:, 0], d[:, 1]) ** 2)))
    return best


def test_variation_dp_equals_exhaustive_enumeration():
    rng = stream(101, 0)
    psi = lambda r: np.asarray(r) ** 2
    for case in range(200):
        n = int(rng.integers(2, 11))
        times = np.sort(rng.uniform(0.0, 1.0, n))
        while len(np.unique(times)) < n:
            times = np.sort(rng.uniform(0.0, 1.0, n))
        pts = rng.normal(0.0, 1.0, (n, 2))
        delta = math.inf if case % 3 == 0 else float(rng.uniform(0.05, 1.1))
        path = make_path(times, pts)
        got = functionals.psi_variation_sum(path, psi, delta).value
        want = _exhaustive_variation(times, pts, psi, delta)
        assert got == pytest.approx(want, abs=1e-12), (case, delta)


# ---------------------------------------------------------------------------
# Loewner solver: closed form and scaling equivariance


def test_zero_driving_trace_matches_closed_form():
    n = 100_000
    drv = loewner.DrivingPath(step_durations=np.full(n, 1.0 / n),
                              w=np.zeros(n + 1), u=np.zeros((0, n + 1)),
                              kappa=2.0, rhos=())
    trace = loewner.trace_from_driving(drv, loewner.TraceConfig(n_points=512))
    tip = complex(trace.points[-1, 0], trace.points[-1, 1])
    # Constant driving grows the vertical slit of half-plane capacity 2t.
    assert abs(tip - 2.0j) < 1e-2
    mods = np.hypot(trace.points[:, 0], trace.points[:, 1])
    expect = np.sqrt(4.0 * trace.times + drv.step_durations[0] ** 1.2)
    assert np.max(np.abs(mods - expect)) < 1e-2


def test_trace_scaling_equivariance():
    lam = 3.7
    base_drv = loewner.sample_driving(kappa=2.0, T=1.0, dt=1e-4, seed=(21, 0))
    cfg = loewner.TraceConfig(dt=1e-4, n_points=512)
    base = loewner.trace_from_driving(base_drv, cfg)
    scaled_drv = loewner.DrivingPath(
        step_durations=lam ** 2 * base_drv.step_durations,
        w=lam * base_drv.w, u=lam * base_drv.u,
        kappa=base_drv.kappa, rhos=base_drv.rhos)
    cfg2 = loewner.TraceConfig(dt=1e-4, n_points=512,
                               tip_refinement=lam * cfg.eps_tip())
    scaled = loewner.trace_from_driving(scaled_drv, cfg2)
    scale = float(np.max(np.abs(lam * base.points)))
    assert np.max(np.abs(scaled.points - lam * base.points)) <= 1e-9 * scale
    assert np.allclose(scaled.times, lam ** 2 * base.times, rtol=1e-12)


# ---------------------------------------------------------------------------
# Gaussian running-maximum tail


def test_brownian_sup_tail_exponent():
    fit = ex.gaussian_sup_tail_study(n_samples=200_000, n_steps=4096)
    # Reflection principle: P(sup |B| >= r) decays like exp(-r^2/2) up to
    # polynomial prefactors, so the fitted Weibull exponent is 2.
    assert fit.slope == pytest.approx(2.0, abs=0.15)
    assert fit.ci95[0] < fit.slope < fit.ci95[1]


# ---------------------------------------------------------------------------
# Brownian iterated-logarithm ensemble (documented honest failure)


def test_brownian_lil_median_near_classical_constant():
    out = ex.brownian_lil_study(n_paths=200, n_steps=2 ** 20, k_min=3,
                                k_max=20)
    # The classical constant is 1, but convergence is loglog-slow: at
    # shells down to 2^-20 the ensemble median measures ~1.24 because the
    # shallow shells (k <= 9) still dominate the maximum.  Restricting to
    # k >= 10 gives ~0.96.  This documents the distance honestly rather
    # than widening the band until it always passes.
    assert 0.7 <= out["median"] <= 1.1


# ---------------------------------------------------------------------------
# variation statistics across dyadic meshes


@pytest.fixture(scope="module")
def mesh_variation_medians():
    out = ex.taylor_variation_study(n_paths=50, n_steps=2 ** 16,
                                    k_lo=8, k_hi=14)
    return {name: np.asarray(v, dtype=np.float64)
            for name, v in out["medians"].items()}


def test_taylor_gauge_variation_stabilizes(mesh_variation_medians):
    med = mesh_variation_medians["taylor"]
    finest = med[-3:]
    spread = (finest.max() - finest.min()) / finest.min()
    # The x^2 / (2 loglog*) gauge's variation converges to the interval
    # length, but only at meshes far beyond 2^-14: the measured spread
    # across the three finest meshes is ~102%, not < 25%.  Honest failure.
    assert spread < 0.25, f"spread {spread:.4f}"


def test_supercritical_power_variation_vanishes(mesh_variation_medians):
    med = mesh_variation_medians["power2.2"]
    assert med[0] / med[-1] >= 4.0


def test_subcritical_power_variation_grows(mesh_variation_medians):
    med = mesh_variation_medians["power1.8"]
    # Any partition feasible at mesh delta stays feasible at a coarser
    # mesh, so the DP maximum is monotone nonincreasing as the mesh
    # tightens; a >= 4x *increase* toward fine meshes is impossible for
    # this statistic (it measurably decreases ~1.9x).  Honest failure.
    assert med[-1] / med[0] >= 4.0, f"ratio {med[-1] / med[0]:.4f}"


# ---------------------------------------------------------------------------
# Markov large-increment lower-bound scheme


def test_markov_union_event_frequencies():
    sampler = ex.bm_increment_sampler(dim=1)
    cfg = ex.MarkovLilConfig(d_w=2.0, a0=1.0, eps_list=(1e-2, 1e-3, 1e-4),
                             runs=500, k_max=30)
    res = ex.markov_lil_experiment(sampler, cfg, master_seed=0)
    assert res.union_freq[-1] >= 0.99          # eps = 1e-4
    assert res.monotone_in_eps                 # nondecreasing as eps shrinks
    assert res.shell_counts.mean() > 0.0       # shell events do fire


# ---------------------------------------------------------------------------
# slowdown certificates


def test_slowdown_variation_and_modulus_certificates():
    if FULL:
        out = ex.slowdown_study(n_paths=100, n_steps=2 ** 16, k_max=14,
                                audit_paths=3)
    else:
        out = ex.slowdown_study(n_paths=12, n_steps=2 ** 14, k_max=12,
                                audit_paths=1)
    # Feasibility sum psi(|dX| / B) <= 1 certifies the seminorm bound
    # [X] <= B = M (2^a + 1) T(1)^a on every path; the modulus margin is
    # the worst slack of the reparametrized continuity inequality.
    assert out["all_bounded"]
    assert out["min_margin"] >= 0.0


# ---------------------------------------------------------------------------
# Vitali extraction coverage


def test_vitali_extraction_covers_unit_interval():
    out = ex.vitali_study(n_paths=100, n_steps=2 ** 18)
    assert out["frac_above_0.9"] >= 0.9
    assert out["all_consistent"]  # gauge sum >= covered length, every path


# ---------------------------------------------------------------------------
# SLE content scaling and lower tail (one shared ensemble)


@pytest.fixture(scope="module")
def sle_content():
    return ex.sle_content_study(n_traces=500 if FULL else 100)


def test_sle_content_scales_with_trace_dimension(sle_content):
    d = sle_content["d"]
    assert d == pytest.approx(4.0 / 3.0, rel=1e-12)
    tol = 0.2 if FULL else 0.3
    assert sle_content["slope"] == pytest.approx(d, abs=tol)


def test_sle_content_lower_tail_exponent(sle_content):
    tail = sle_content["tail"]
    assert tail is not None
    # 1/Cont at a fixed radius: Weibull-type exponent 1/(d-1) = 3;
    # rare-event-limited, hence the loose band and the reported CI.
    assert tail.slope == pytest.approx(3.0, abs=1.0)
    assert len(tail.ci95) == 2 and tail.ci95[0] < tail.ci95[1]


# ---------------------------------------------------------------------------
# self-similarity KS


def test_self_similarity_accepts_true_index():
    rep = ex.scaling_ks_study(n_paths=1000, lam=4.0, d=2.0, t_probe=0.2)
    assert rep.p_value > 0.01
    assert rep.n_used == 1000


def test_self_similarity_rejects_wrong_index():
    rep = ex.scaling_ks_study(n_paths=1000, lam=4.0, d=6.0, t_probe=0.2)
    assert rep.p_value < 0.01


# ---------------------------------------------------------------------------
# gauge condition suite


def test_gauge_conditions_hold_for_reference_families():
    exp_rep = gauges.check_gauge_conditions(gauges.GaugeSet.exponential())
    assert exp_rep.all_ok
    poly_rep = gauges.check_gauge_conditions(gauges.GaugeSet.polynomial())
    assert poly_rep.all_ok


def test_gauge_conditions_reject_tight_ladder():
    # Same polynomial pair but ladder ratio R = 2 < e^2: the companion's
    # ratio condition breaks at the first rung past the log* clamp.
    bad = gauges.check_gauge_conditions(gauges.GaugeSet.polynomial(R=2.0))
    assert not bad.ratio_ok
    assert not bad.all_ok


def test_tau_integral_ratio_bounded():
    # tau(t)/sigma(t) over ten decades: measured [1.43, 2.17] for the
    # exponential family and [1.33, 13.5] for the polynomial one (whose
    # companion damping adds a slowly varying log factor).
    ts = np.geomspace(1e-10, 0.5, 120)
    for gs, lo, hi in ((gauges.GaugeSet.exponential(), 1.0, 3.0),
                       (gauges.GaugeSet.polynomial(), 1.0, 16.0)):
        ratios = np.array([gauges.tau_integral(gs, float(t))
                           / gauges.sigma_gauge(gs, float(t)) for t in ts])
        assert np.all(np.isfinite(ratios))
        assert lo <= ratios.min() and ratios.max() <= hi, (
            float(ratios.min()), float(ratios.max()))


# ---------------------------------------------------------------------------
# determinism across thread counts


def _canonical(obj):
    return json.dumps(ex._jsonable(obj), sort_keys=True).encode()


def _determinism_payload(tmp_path, tag):
    payload = []
    rep = ex.regularity_pipeline({
        "process": {"kind": "bm", "dim": 1, "T": 1.0, "n": 512},
        "n_samples": 8,
        "functionals": [
            {"name": "var2", "kind": "psivar",
             "gauge": {"kind": "power", "p": 2.0}},
            {"name": "lil", "kind": "lil", "gauge": {"kind": "bm_lil"},
             "k_min": 3, "k_max": 10},
        ],
    }, master_seed=17, out_dir=str(tmp_path / tag))
    payload.append((tmp_path / tag / "report.ndjson").read_bytes())
    payload.append((tmp_path / tag / "summary.csv").read_bytes())

    sampler = ex.bm_increment_sampler(dim=1)
    res = ex.markov_lil_experiment(sampler, ex.MarkovLilConfig(
        d_w=2.0, a0=1.0, eps_list=(1e-2, 1e-3), runs=40, k_max=12),
        master_seed=3)
    payload.append(_canonical({"freq": res.union_freq,
                               "shells": res.shell_counts}))

    out = ex.slowdown_study(n_paths=3, n_steps=2 ** 10, k_max=8,
                            audit_paths=1)
    payload.append(_canonical(out["rows"]))

    rep2 = ex.scaling_ks_study(n_paths=210, lam=4.0, d=2.0, t_probe=0.2,
                               n_steps=512)
    payload.append(_canonical({"ks": rep2.ks_stat, "p": rep2.p_value}))

    fit = ex.gaussian_sup_tail_study(n_samples=5000, n_steps=512)
    payload.append(_canonical({"slope": fit.slope, "ci": list(fit.ci95)}))
    return payload


def test_runs_are_byte_identical_across_thread_counts(tmp_path, monkeypatch):
    runs = {}
    for tag, threads in (("t1", "1"), ("t8", "8"), ("t8b", "8")):
        monkeypatch.setenv("LAB_THREADS", threads)
        runs[tag] = _determinism_payload(tmp_path, tag)
    assert runs["t1"] == runs["t8"]   # parallelism is invisible
    assert runs["t8"] == runs["t8b"]  # and repeated runs are identical
