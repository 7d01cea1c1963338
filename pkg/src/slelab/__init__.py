"""slelab — a numerical laboratory for Loewner traces and sharp path regularity.

The package simulates SLE(kappa, rho) traces through discretized Loewner
chains, reparametrizes them by Minkowski content, and measures the sharp
regularity functionals of continuous paths — psi-variation, modulus of
continuity, iterated-logarithm shell statistics, slowdown time changes,
and Vitali-type interval extraction — against exact Brownian-motion
oracles and Monte Carlo ensembles.

Layout:

* ``paths`` — immutable sampled planar paths and window geometry.
* ``gauges`` — gauge families (Phi, phi, h), derived sigma/psi/tau gauges,
  admissibility checks, and the dimension-d sharp gauges.
* ``loewner`` — driving-function SDE samplers and the slit-map trace solver.
* ``content`` — raster Minkowski-content estimation and the natural
  (content) parametrization.
* ``functionals`` — the regularity functionals and construction schemes.
* ``experiments`` — ensemble experiments, tail/crossing/scaling/LIL
  studies, and the config-driven pipeline.
* ``kernels`` — compiled/NumPy kernel dispatch (env SLELAB_PURE=1 forces
  the NumPy fallback).

All randomness is drawn from counter-based streams keyed by
(master_seed, sample_index), so every experiment is reproducible and
independent of the worker count (capped by env LAB_THREADS).
"""

from . import content, experiments, functionals, gauges, kernels, loewner, paths
from .content import (
    AdditivityReport,
    ContentProfile,
    additivity_defect,
    content_profile,
    default_resolution,
    geometric_levels,
    minkowski_content,
    natural_reparametrize,
)
from .errors import (
    BranchError,
    ConfigError,
    DegenerateProfile,
    DivergentIntegral,
    EmptyWindow,
    ForcePointCollision,
    InfiniteTimeChange,
    InsufficientHits,
    InsufficientSamples,
    InsufficientTailData,
    InvalidProbability,
    LabError,
    LengthMismatch,
    NonFiniteValue,
    NonMonotoneTimes,
    NonPositiveInput,
    NotIncreasing,
    OutOfDomain,
    ResolutionError,
)
from .experiments import (
    CrossingReport,
    ExperimentReport,
    MarkovLilConfig,
    MarkovLilResult,
    ScalingReport,
    TailFit,
    crossing_time_experiment,
    ensemble_map,
    markov_lil_experiment,
    regularity_pipeline,
    scaling_check,
    tail_fit,
)
from .functionals import (
    BorelCantelliBound,
    LilResult,
    SlowdownResult,
    VariationResult,
    VitaliResult,
    ball_packing_count,
    conditional_bc_bound,
    lil_statistic,
    moc_ratio,
    psi_variation_seminorm,
    psi_variation_sum,
    slowdown_reparam,
    vitali_extract,
)
from .gauges import (
    ExpGauge,
    GaugeSet,
    PolyGauge,
    PowerLaw,
    check_gauge_conditions,
    gauge_set_from_spec,
    invert_monotone,
    lil_gauge,
    log_star,
    moc_gauge,
    psi_variation_gauge,
    tau_integral,
    trace_dimension,
)
from .kernels import backend_name
from .loewner import (
    DrivingPath,
    TraceConfig,
    interior_segment,
    sample_bm,
    sample_driving,
    trace_from_driving,
)
from .paths import SampledPath, diameter, hitting_time, load_csv, make_path, oscillation, save_csv
from .rng import stream

__version__ = "0.1.0"

__all__ = [
    "AdditivityReport", "BorelCantelliBound", "BranchError", "ConfigError",
    "ContentProfile", "CrossingReport", "DegenerateProfile",
    "DivergentIntegral", "DrivingPath", "EmptyWindow", "ExpGauge",
    "ExperimentReport", "ForcePointCollision", "GaugeSet",
    "InfiniteTimeChange", "InsufficientHits", "InsufficientSamples",
    "InsufficientTailData", "InvalidProbability", "LabError",
    "LengthMismatch", "LilResult", "MarkovLilConfig", "MarkovLilResult",
    "NonFiniteValue", "NonMonotoneTimes", "NonPositiveInput",
    "NotIncreasing", "OutOfDomain", "PolyGauge", "PowerLaw",
    "ResolutionError", "SampledPath", "ScalingReport", "SlowdownResult",
    "TailFit", "TraceConfig", "VariationResult", "VitaliResult",
    "additivity_defect", "backend_name", "ball_packing_count",
    "check_gauge_conditions", "conditional_bc_bound", "content",
    "content_profile", "crossing_time_experiment", "default_resolution",
    "diameter", "ensemble_map", "experiments", "functionals",
    "gauge_set_from_spec", "gauges", "geometric_levels", "hitting_time",
    "interior_segment", "invert_monotone", "kernels", "lil_gauge",
    "lil_statistic", "load_csv", "loewner", "log_star",
    "make_path", "markov_lil_experiment", "minkowski_content", "moc_gauge",
    "moc_ratio", "natural_reparametrize", "oscillation", "paths",
    "psi_variation_gauge", "psi_variation_seminorm", "psi_variation_sum",
    "regularity_pipeline", "sample_bm", "sample_driving", "save_csv",
    "scaling_check", "slowdown_reparam", "stream", "tail_fit",
    "tau_integral", "trace_dimension", "trace_from_driving",
    "vitali_extract",
]
