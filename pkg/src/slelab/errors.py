"""Exception hierarchy shared across the laboratory.

Every error raised by the public API derives from :class:`LabError`, so
callers (and the CLI, which maps them to exit code 3) can catch one type.
"""


class LabError(Exception):
    """Base class for all errors raised by this package."""


# -- sampled paths -----------------------------------------------------------

class LengthMismatch(LabError):
    """times and points have different lengths."""


class NonMonotoneTimes(LabError):
    """times are not strictly increasing."""


class NonFiniteValue(LabError):
    """an input contains NaN or infinity."""


class EmptyWindow(LabError):
    """a query window contains no samples."""


# -- gauges ------------------------------------------------------------------

class NonPositiveInput(LabError):
    """argument must be strictly positive."""


class OutOfDomain(LabError):
    """argument lies outside the gauge's domain."""


class NotIncreasing(LabError):
    """a function that must be strictly increasing is not."""


class DivergentIntegral(LabError):
    """the integrand is not integrable for the supplied gauge."""


# -- Loewner evolutions ------------------------------------------------------

class ForcePointCollision(LabError):
    """driving function and a force point collided irrecoverably."""


class BranchError(LabError):
    """a conformal-map evaluation left the upper half-plane.

    Carries the index of the offending output sample in ``step_index``.
    """

    def __init__(self, message, step_index=None):
        super().__init__(message)
        self.step_index = step_index


# -- Minkowski content -------------------------------------------------------

class ResolutionError(LabError):
    """grid spacing or level count is inadequate for the requested radii."""


class DegenerateProfile(LabError):
    """a content profile carries no usable increase."""


# -- regularity functionals --------------------------------------------------

class InfiniteTimeChange(LabError):
    """the slowed-down clock diverges (some slowdown factor hit zero)."""


# -- experiments -------------------------------------------------------------

class InsufficientTailData(LabError):
    """too few usable survival-probability points for a tail fit."""


class InsufficientHits(LabError):
    """too few paths reach the required radius."""


class InsufficientSamples(LabError):
    """an ensemble is too small for the requested statistic."""


class InvalidProbability(LabError):
    """a probability argument lies outside its admissible range."""


class ConfigError(LabError):
    """a configuration file or CLI argument set is invalid."""
