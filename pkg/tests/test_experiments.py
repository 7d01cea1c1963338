import json
import math

import numpy as np
import pytest

from slelab import experiments as ex
from slelab.errors import (ConfigError, InsufficientHits, InsufficientSamples,
                           InsufficientTailData, LabError)
from slelab.gauges import (lil_gauge, log_star, moc_gauge, psi_variation_gauge)
from slelab.loewner import sample_bm
from slelab.paths import make_path
from slelab.rng import stream


# ---------------------------------------------------------------------------
# threading plumbing


def test_lab_threads_env(monkeypatch):
    monkeypatch.delenv("LAB_THREADS", raising=False)
    assert ex.lab_threads() == 1
    monkeypatch.setenv("LAB_THREADS", "5")
    assert ex.lab_threads() == 5
    monkeypatch.setenv("LAB_THREADS", "zebra")
    with pytest.raises(ConfigError):
        ex.lab_threads()


def test_ensemble_map_preserves_order(monkeypatch):
    monkeypatch.setenv("LAB_THREADS", "4")
    out = ex.ensemble_map(lambda i: i * i, 200)
    assert out == [i * i for i in range(200)]


# ---------------------------------------------------------------------------
# tail fitting


def test_tail_fit_recovers_exact_weibull_exponent():
    # If P(X >= r) = exp(-r^2) exactly, the double-log regression has slope
    # exactly 2 with no prefactor bias; sqrt of an exponential does it.
    rng = stream(2026, 0)
    samples = np.sqrt(rng.exponential(1.0, size=100_000))
    fit = ex.tail_fit(samples, np.linspace(1.0, 3.0, 13))
    assert fit.slope == pytest.approx(2.0, abs=0.05)
    assert fit.ci95[0] < 2.0 < fit.ci95[1]
    assert fit.n_samples == 100_000
    # Fit window: all used survivals inside [5/n, 1/2].
    used_surv = fit.survival[fit.used]
    assert np.all((used_surv >= 5.0 / 100_000) & (used_surv <= 0.5))


def test_tail_fit_is_deterministic():
    rng = stream(7, 0)
    samples = np.sqrt(rng.exponential(1.0, size=20_000))
    grid = np.linspace(1.0, 2.6, 9)
    a = ex.tail_fit(samples, grid, boot_seed=3)
    b = ex.tail_fit(samples, grid, boot_seed=3)
    assert a.slope == b.slope and a.ci95 == b.ci95


def test_tail_fit_insufficient_data():
    with pytest.raises(InsufficientTailData):
        ex.tail_fit(np.ones(10), np.linspace(1, 2, 8))
    # Plenty of samples but no grid point lands in the fit window.
    with pytest.raises(InsufficientTailData):
        ex.tail_fit(np.full(5000, 0.01), np.linspace(1.0, 2.0, 8))
    with pytest.raises(InsufficientTailData):
        ex.tail_fit(np.full(5000, np.nan), np.linspace(1.0, 2.0, 8))


# ---------------------------------------------------------------------------
# crossing times


def _radial_ensemble(n=100, T=200.0, steps=201):
    # Path i moves outward at constant speed v_i = (i+1)/n.
    paths = []
    times = np.linspace(0.0, T, steps)
    for i in range(n):
        v = (i + 1) / n
        paths.append(make_path(times, np.column_stack(
            [v * times, np.zeros(steps)])))
    return paths


def test_crossing_frequencies_exact_for_constant_speeds():
    # With a fixed budget l, radius r + r' is reached in time iff
    # r'/v <= l, so the frequency at r' is the fraction of speeds >= r'/l.
    # T is large enough that every path reaches every radius, and the
    # thresholds 2*r' sit strictly between consecutive speed-grid values.
    n = 100
    ensemble = _radial_ensemble(n=n)
    rep = ex.crossing_time_experiment(ensemble, l=0.5, r=0.5,
                                      r_prime_grid=(0.1037, 0.2037, 0.4037),
                                      budget="fixed")
    speeds = (np.arange(n) + 1) / n
    for rp, freq in zip(rep.r_prime_grid, rep.frequencies):
        expected = np.mean(speeds >= 2.0 * rp)
        assert freq == pytest.approx(expected)
    assert list(rep.frequencies) == [0.80, 0.60, 0.20]
    assert rep.n_valid == n
    assert np.all(np.diff(rep.frequencies) <= 0.0)


def test_crossing_requires_hits_and_valid_config():
    ensemble = _radial_ensemble(n=30, T=0.1)  # barely moves: never hits r
    with pytest.raises(InsufficientHits):
        ex.crossing_time_experiment(ensemble, l=0.5, r=5.0,
                                    r_prime_grid=(0.1,))
    with pytest.raises(ConfigError):
        ex.crossing_time_experiment(ensemble, l=0.5, r=0.5,
                                    r_prime_grid=(0.1,), budget="quadratic")
    with pytest.raises(ConfigError):
        ex.crossing_time_experiment(ensemble, l=-1.0, r=0.5,
                                    r_prime_grid=(0.1,))


def test_crossing_bm_study_decay_is_positive():
    rep = ex.crossing_bm_study(n_paths=150, n_steps=2 ** 11, T=8.0)
    assert rep.n_valid >= 100
    assert np.all(np.diff(rep.frequencies) <= 0.0)
    assert rep.decay_rate > 0.0


# ---------------------------------------------------------------------------
# scaling check


def test_scaling_check_identity_at_lambda_one():
    ensemble = [sample_bm(1, T=1.0, n=256, seed=(0, i)) for i in range(250)]
    rep = ex.scaling_check(ensemble, lam=1.0, d=2.0, t_probe=0.3)
    assert rep.ks_stat == 0.0 and rep.p_value == 1.0
    assert rep.n_used == 250


def test_scaling_check_accepts_true_index_and_rejects_wrong_one():
    ensemble = [sample_bm(1, T=1.0, n=512, seed=(1, i)) for i in range(400)]
    good = ex.scaling_check(ensemble, lam=4.0, d=2.0, t_probe=0.2)
    bad = ex.scaling_check(ensemble, lam=4.0, d=6.0, t_probe=0.2)
    assert good.p_value > 0.01
    assert bad.p_value < 1e-4


def test_scaling_check_needs_coverage():
    ensemble = [sample_bm(1, T=0.5, n=64, seed=(2, i)) for i in range(300)]
    with pytest.raises(InsufficientSamples):
        ex.scaling_check(ensemble, lam=4.0, d=2.0, t_probe=0.2)  # needs t=0.8


# ---------------------------------------------------------------------------
# Markov large-increment experiment


def test_markov_lil_config_validation():
    with pytest.raises(ConfigError):
        ex.MarkovLilConfig(d_w=1.0, a0=1.0, eps_list=(0.1,), runs=10)
    with pytest.raises(ConfigError):
        ex.MarkovLilConfig(d_w=2.0, a0=-1.0, eps_list=(0.1,), runs=10)
    with pytest.raises(ConfigError):
        ex.MarkovLilConfig(d_w=2.0, a0=1.0, eps_list=(1.5,), runs=10)
    with pytest.raises(ConfigError):
        ex.MarkovLilConfig(d_w=2.0, a0=1.0, eps_list=(0.1,), runs=0)


def test_markov_lil_amplitude_extremes_are_exact():
    sampler = ex.bm_increment_sampler(dim=1)
    base = dict(d_w=2.0, eps_list=(0.2, 0.05), runs=32, k_max=6)
    sure = ex.markov_lil_experiment(sampler, ex.MarkovLilConfig(a0=0.0, **base))
    assert np.all(sure.union_freq == 1.0)  # zero threshold: every run hits
    assert np.all(sure.shell_counts == 5)  # all shells k = 2..6 fire
    assert sure.monotone_in_eps
    never = ex.markov_lil_experiment(sampler,
                                     ex.MarkovLilConfig(a0=1e6, **base))
    assert np.all(never.union_freq == 0.0)
    assert np.all(never.shell_counts == 0)


def test_markov_lil_is_reproducible_and_counts_shells():
    sampler = ex.bm_increment_sampler(dim=1)
    cfg = ex.MarkovLilConfig(d_w=2.0, a0=1.0, eps_list=(0.1, 0.01), runs=48,
                             k_max=12)
    a = ex.markov_lil_experiment(sampler, cfg, master_seed=5)
    b = ex.markov_lil_experiment(sampler, cfg, master_seed=5)
    assert np.array_equal(a.union_freq, b.union_freq)
    assert np.array_equal(a.shell_counts, b.shell_counts)
    assert a.shell_counts.shape == (48,)
    assert np.all((a.union_freq >= 0.0) & (a.union_freq <= 1.0))


# ---------------------------------------------------------------------------
# gauge specs


def test_functional_gauge_from_spec_matches_direct_gauges():
    x = np.array([1e-6, 1e-3, 0.1, 0.9])
    d = 4.0 / 3.0
    assert np.allclose(ex.functional_gauge_from_spec(
        {"kind": "sle_psi", "d": d})(x), psi_variation_gauge(x, d))
    assert np.allclose(ex.functional_gauge_from_spec(
        {"kind": "sle_moc", "d": d})(x), moc_gauge(x, d))
    assert np.allclose(ex.functional_gauge_from_spec(
        {"kind": "sle_lil", "d": d})(x), lil_gauge(x, d))
    assert np.allclose(ex.functional_gauge_from_spec(
        {"kind": "power", "p": 1.7})(x), x ** 1.7)
    taylor = ex.functional_gauge_from_spec({"kind": "taylor"})
    assert np.allclose(taylor(x), x * x / (2.0 * log_star(log_star(1.0 / x))))
    # At t = 0.5 both iterated logs clamp: bm_lil = sqrt(2 * 0.5 * 1) = 1.
    bm_lil = ex.functional_gauge_from_spec({"kind": "bm_lil"})
    assert bm_lil(0.5) == pytest.approx(1.0)


def test_functional_gauge_spec_validation():
    with pytest.raises(ConfigError):
        ex.functional_gauge_from_spec({"kind": "mystery"})
    with pytest.raises(ConfigError):
        ex.functional_gauge_from_spec("power")


# ---------------------------------------------------------------------------
# report files


def test_write_reports_roundtrip(tmp_path):
    rows = [{"b": np.float64(1.5), "a": np.int32(2),
             "nested": {"x": np.bool_(True), "arr": np.arange(3)}}]
    summary = [{"metric": "m1", "median": 0.5},
               {"metric": "m2", "median": 1.5, "extra": 7}]
    nd, cv = ex.write_reports(rows, summary, str(tmp_path))
    with open(nd) as fh:
        parsed = [json.loads(line) for line in fh]
    assert parsed == [{"a": 2, "b": 1.5,
                       "nested": {"arr": [0, 1, 2], "x": True}}]
    lines = open(cv).read().splitlines()
    assert lines[0] == "metric,median,extra"
    assert lines[1] == "m1,0.5,"
    assert lines[2] == "m2,1.5,7"


# ---------------------------------------------------------------------------
# the config-driven pipeline


def _tiny_config():
    return {
        "process": {"kind": "bm", "dim": 1, "T": 1.0, "n": 256},
        "n_samples": 6,
        "functionals": [
            {"name": "var2", "kind": "psivar",
             "gauge": {"kind": "power", "p": 2.0}},
            {"name": "moc", "kind": "moc",
             "gauge": {"kind": "bm_lil"}, "delta": 0.25},
        ],
    }


def test_pipeline_rows_and_summary(tmp_path):
    rep = ex.regularity_pipeline(_tiny_config(), master_seed=9,
                                 out_dir=str(tmp_path))
    assert len(rep.rows) == 6
    for i, row in enumerate(rep.rows):
        assert row["sample"] == i and row["seed"] == [9, i]
        assert row["var2"]["value"] > 0.0
        assert row["moc"]["value"] > 0.0
    metrics = {s["metric"]: s for s in rep.summary}
    assert set(metrics) == {"var2", "moc"}
    assert metrics["var2"]["n"] == 6
    vals = sorted(row["var2"]["value"] for row in rep.rows)
    assert metrics["var2"]["median"] == pytest.approx(
        0.5 * (vals[2] + vals[3]))


def test_pipeline_output_independent_of_thread_count(tmp_path, monkeypatch):
    monkeypatch.setenv("LAB_THREADS", "1")
    ex.regularity_pipeline(_tiny_config(), master_seed=3,
                           out_dir=str(tmp_path / "serial"))
    monkeypatch.setenv("LAB_THREADS", "4")
    ex.regularity_pipeline(_tiny_config(), master_seed=3,
                           out_dir=str(tmp_path / "threads"))
    for name in ("report.ndjson", "summary.csv"):
        a = (tmp_path / "serial" / name).read_bytes()
        b = (tmp_path / "threads" / name).read_bytes()
        assert a == b


def test_pipeline_natural_param(tmp_path):
    config = {
        "process": {"kind": "bm", "dim": 2, "T": 1.0, "n": 256},
        "n_samples": 3,
        "natural_param": True,
        "d": 4.0 / 3.0,
        "functionals": [{"name": "moc", "kind": "moc",
                         "gauge": {"kind": "sle_moc", "d": 4.0 / 3.0}}],
    }
    rep = ex.regularity_pipeline(config, master_seed=1, out_dir=str(tmp_path))
    assert all(row["moc"]["value"] > 0.0 for row in rep.rows)


def test_pipeline_validates_config(tmp_path):
    with pytest.raises(ConfigError):
        ex.regularity_pipeline(["not", "a", "dict"], out_dir=str(tmp_path))
    with pytest.raises(ConfigError):
        ex.regularity_pipeline({"process": {"kind": "bm"}},
                               out_dir=str(tmp_path))
    bad = _tiny_config()
    del bad["functionals"][0]["name"]
    with pytest.raises(ConfigError):
        ex.regularity_pipeline(bad, out_dir=str(tmp_path))


def test_pipeline_tags_failing_path_seeds(tmp_path):
    # The tag keeps the original class: a config mistake discovered inside
    # a worker still surfaces as ConfigError (CLI exit 2, not 3).
    config = _tiny_config()
    config["functionals"][0]["gauge"] = {"kind": "mystery"}
    with pytest.raises(ConfigError, match=r"path seed \(3, 0\)"):
        ex.regularity_pipeline(config, master_seed=3, out_dir=str(tmp_path))


# ---------------------------------------------------------------------------
# study smoke runs (full-size runs live in the acceptance suite)


def test_gaussian_sup_tail_study_smoke():
    fit = ex.gaussian_sup_tail_study(n_samples=4000, n_steps=256,
                                     r_grid=np.linspace(0.9, 2.4, 9))
    assert 1.2 < fit.slope < 2.6
    assert fit.n_samples == 4000


def test_scaling_ks_study_identity_smoke():
    rep = ex.scaling_ks_study(n_paths=250, lam=1.0, d=2.0, t_probe=0.25,
                              n_steps=256)
    assert rep.ks_stat == 0.0 and rep.p_value == 1.0


def test_vitali_study_smoke():
    out = ex.vitali_study(n_paths=4, n_steps=2 ** 12)
    assert out["all_consistent"]
    assert out["coverages"].shape == (4,)
    assert np.all((out["coverages"] >= 0.0) & (out["coverages"] <= 1.0))


def test_slowdown_study_smoke():
    out = ex.slowdown_study(n_paths=2, n_steps=2 ** 10, k_max=6,
                            audit_paths=1, include_raw=True)
    assert len(out["rows"]) == 2
    for row in out["rows"]:
        assert row["bound"] == pytest.approx(
            (2 ** 0.5 + 1) * row["M"] * row["T1"] ** 0.5)
        assert row["margin"] >= 0.0
        assert row["raw_sum"] >= 0.0
    assert out["all_bounded"] == all(r["feasibility"] <= 1.0
                                     for r in out["rows"])
