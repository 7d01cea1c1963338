"""Command-line front end.

Every subcommand reads one TOML or JSON config file, runs the matching
experiment, and writes ``report.ndjson`` (one object per path/row) and
``summary.csv`` (aggregates) into the output directory.

Exit codes: 0 on success, 2 on configuration errors (unreadable or
invalid config, unknown keys missing), 3 on numerical failures raised by
the laboratory itself (collisions, degenerate profiles, insufficient
data).

Parallelism across ensemble members is capped by the environment
variable ``LAB_THREADS``; results are byte-identical for any setting.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

try:
    import tomllib as _toml
except ImportError:  # Python < 3.11
    import tomli as _toml

from . import content as content_mod
from . import experiments, loewner
from .errors import ConfigError, LabError
from .paths import diameter, save_csv

__all__ = ["main"]


def _load_config(path):
    try:
        if path.endswith(".json"):
            with open(path) as fh:
                cfg = json.load(fh)
        else:
            with open(path, "rb") as fh:
                cfg = _toml.load(fh)
    except (OSError, ValueError, _toml.TOMLDecodeError) as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ConfigError(f"config root must be a table/object, got {type(cfg)}")
    return cfg


def _require(cfg, *keys):
    for key in keys:
        if key not in cfg:
            raise ConfigError(f"config is missing required key {key!r}")
    return [cfg[k] for k in keys]


def _ensemble(cfg, master_seed):
    process, n_samples = _require(cfg, "process", "n_samples")
    n_samples = int(n_samples)

    def one(i):
        return experiments._simulate_from_config(process, (master_seed, i))

    return experiments.ensemble_map(one, n_samples)


def _run_simulate(cfg, master_seed, out_dir):
    os.makedirs(out_dir, exist_ok=True)
    ensemble = _ensemble(cfg, master_seed)
    rows = []
    for i, path in enumerate(ensemble):
        row = {"sample": i, "seed": [master_seed, i], "n_points": len(path),
               "t1": path.t1, "diameter": diameter(path),
               "endpoint": list(path.points[-1])}
        if cfg.get("save_paths", False):
            fname = f"{out_dir}/path_{i:05d}.csv"
            save_csv(path, fname)
            row["file"] = fname
        rows.append(row)
    diams = np.array([r["diameter"] for r in rows], dtype=np.float64)
    summary = [{"metric": "diameter", "median": _med(diams),
                "q1": _q(diams, 25), "q3": _q(diams, 75), "n": len(rows)}]
    return rows, summary


def _med(arr):
    return float(np.median(arr)) if len(arr) else math.nan


def _q(arr, q):
    return float(np.percentile(arr, q)) if len(arr) else math.nan


def _run_content(cfg, master_seed, out_dir):
    (d,) = _require(cfg, "d")
    ensemble = _ensemble(cfg, master_seed)
    rows = []
    for i, path in enumerate(ensemble):
        if "eps_levels" in cfg:
            eps = np.asarray(cfg["eps_levels"], dtype=np.float64)
            grid_h = float(cfg.get("grid_h", eps.min() / 8.0))
        else:
            eps, grid_h = content_mod.default_resolution(diameter(path))
        value = content_mod.minkowski_content(path.points, float(d), eps, grid_h)
        rows.append({"sample": i, "seed": [master_seed, i],
                     "content": value, "eps_levels": list(eps),
                     "grid_h": grid_h})
    vals = np.array([r["content"] for r in rows], dtype=np.float64)
    summary = [{"metric": "content", "median": _med(vals),
                "q1": _q(vals, 25), "q3": _q(vals, 75), "n": len(rows)}]
    return rows, summary


def _run_functional(cfg, master_seed, out_dir):
    cfg = dict(cfg)
    cfg["natural_param"] = False
    report = experiments.regularity_pipeline(cfg, master_seed=master_seed,
                                             out_dir=out_dir)
    return list(report.rows), list(report.summary)


def _run_pipeline(cfg, master_seed, out_dir):
    report = experiments.regularity_pipeline(cfg, master_seed=master_seed,
                                             out_dir=out_dir)
    return list(report.rows), list(report.summary)


def _run_tailfit(cfg, master_seed, out_dir):
    kind = cfg.get("kind", "bm_sup")
    if kind == "bm_sup":
        fit = experiments.gaussian_sup_tail_study(
            n_samples=int(cfg.get("n_samples", 200_000)),
            n_steps=int(cfg.get("n_steps", 4096)),
            master_seed=master_seed,
            r_grid=cfg.get("r_grid"))
    elif kind == "csv":
        (path,) = _require(cfg, "samples_csv")
        try:
            samples = np.loadtxt(path, dtype=np.float64, ndmin=1)
        except (OSError, ValueError) as exc:
            raise ConfigError(f"cannot read samples from {path!r}: {exc}") from exc
        (r_grid,) = _require(cfg, "r_grid")
        fit = experiments.tail_fit(samples, np.asarray(r_grid, dtype=np.float64),
                                   min_samples=int(cfg.get("min_samples", 1000)),
                                   boot_seed=master_seed)
    else:
        raise ConfigError(f"unknown tailfit kind {kind!r}")
    rows = [{"r": float(r), "survival": float(s), "used": bool(u)}
            for r, s, u in zip(fit.r_grid, fit.survival, fit.used)]
    summary = [{"metric": "tail_slope", "value": fit.slope,
                "ci_lo": fit.ci95[0], "ci_hi": fit.ci95[1],
                "n": fit.n_samples}]
    return rows, summary


def _run_crossing(cfg, master_seed, out_dir):
    l, r, grid = _require(cfg, "l", "r", "r_prime_grid")
    ensemble = _ensemble(cfg, master_seed)
    rep = experiments.crossing_time_experiment(
        ensemble, l=float(l), r=float(r), r_prime_grid=grid,
        budget=cfg.get("budget", "linear"), form=float(cfg.get("form", 1.0)))
    rows = [{"r_prime": float(rp), "frequency": float(f)}
            for rp, f in zip(rep.r_prime_grid, rep.frequencies)]
    summary = [{"metric": "decay_rate", "value": rep.decay_rate,
                "budget": rep.budget, "form": rep.form, "n": rep.n_valid}]
    return rows, summary


def _run_scaling(cfg, master_seed, out_dir):
    lam, d, t_probe = _require(cfg, "lam", "d", "t_probe")
    ensemble = _ensemble(cfg, master_seed)
    rep = experiments.scaling_check(ensemble, lam=float(lam), d=float(d),
                                    t_probe=float(t_probe),
                                    min_paths=int(cfg.get("min_paths", 200)))
    rows = [{"ks_stat": rep.ks_stat, "p_value": rep.p_value,
             "n_used": rep.n_used}]
    summary = [{"metric": "ks_p_value", "value": rep.p_value,
                "ks_stat": rep.ks_stat, "n": rep.n_used}]
    return rows, summary


def _run_markov_lil(cfg, master_seed, out_dir):
    d_w, a0, eps_list, runs = _require(cfg, "d_w", "a0", "eps_list", "runs")
    mcfg = experiments.MarkovLilConfig(d_w=float(d_w), a0=float(a0),
                                       eps_list=tuple(eps_list),
                                       runs=int(runs),
                                       k_max=int(cfg.get("k_max", 30)))
    sampler = experiments.bm_increment_sampler(int(cfg.get("dim", 1)))
    res = experiments.markov_lil_experiment(sampler, mcfg,
                                            master_seed=master_seed)
    rows = [{"run": i, "shell_count": int(c)}
            for i, c in enumerate(res.shell_counts)]
    summary = [{"metric": f"union_freq@eps={eps:g}", "value": float(f)}
               for eps, f in zip(mcfg.eps_list, res.union_freq)]
    summary.append({"metric": "monotone_in_eps",
                    "value": res.monotone_in_eps})
    summary.append({"metric": "mean_shell_count",
                    "value": float(res.shell_counts.mean())})
    return rows, summary


_RUNNERS = {
    "simulate": _run_simulate,
    "content": _run_content,
    "functional": _run_functional,
    "tailfit": _run_tailfit,
    "crossing": _run_crossing,
    "scaling": _run_scaling,
    "markov-lil": _run_markov_lil,
    "pipeline": _run_pipeline,
}


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="slelab",
        description="Loewner-trace regularity laboratory (see package docs)")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _RUNNERS:
        p = sub.add_parser(name, help=f"run the {name} experiment")
        p.add_argument("config", help="TOML or JSON config file")
        p.add_argument("-o", "--out-dir", default=".",
                       help="directory for report.ndjson and summary.csv")
        p.add_argument("--seed", type=int, default=0,
                       help="master seed (default 0)")
    return parser


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _load_config(args.config)
        rows, summary = _RUNNERS[args.command](cfg, args.seed, args.out_dir)
        ndjson_path, csv_path = experiments.write_reports(rows, summary,
                                                          args.out_dir)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except LabError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    print(f"wrote {ndjson_path} and {csv_path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
