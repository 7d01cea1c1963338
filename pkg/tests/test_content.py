import numpy as np
import pytest

from slelab.content import (AdditivityReport, ContentProfile,
                            additivity_defect, content_profile,
                            default_resolution, geometric_levels,
                            minkowski_content, natural_reparametrize)
from slelab.errors import (DegenerateProfile, LengthMismatch, ResolutionError)
from slelab.loewner import sample_bm
from slelab.paths import SampledPath, make_path


def _segment(n=2001, length=1.0):
    x = np.linspace(0.0, length, n)
    return make_path(np.linspace(0.0, 1.0, n), np.column_stack([x, np.zeros(n)]))


# ---------------------------------------------------------------------------
# minkowski_content oracles


def test_segment_content_matches_stadium_area():
    # The eps-neighborhood of a unit segment has area 2 eps L + pi eps^2, so
    # at d = 1 the level estimates are 2L + pi eps and Richardson removes the
    # linear term: the limit is twice the length.
    pts = _segment().points
    eps = geometric_levels(0.05)
    value = minkowski_content(pts, 1.0, eps, grid_h=0.05 / 8)
    assert value == pytest.approx(2.0, rel=0.02)


def test_circle_content_matches_annulus_area():
    # Neighborhood of a radius-R circle is an annulus of area 4 pi R eps,
    # giving content 4 pi R at d = 1.
    theta = np.linspace(0.0, 2 * np.pi, 4001)
    pts = np.column_stack([np.cos(theta), np.sin(theta)])
    value = minkowski_content(pts, 1.0, geometric_levels(0.04), grid_h=0.04 / 8)
    assert value == pytest.approx(4 * np.pi, rel=0.02)


def test_single_point_content_extrapolates_to_zero_at_d1():
    # A point's neighborhood area is pi eps^2; at d = 1 the level estimates
    # are linear in eps, which the two-level extrapolation cancels exactly
    # (up to rasterization error).
    value = minkowski_content(np.array([[0.3, -0.2]]), 1.0,
                              geometric_levels(0.1), grid_h=0.1 / 10)
    assert abs(value) < 0.05


def test_empty_set_has_zero_content():
    assert minkowski_content(np.empty((0, 2)), 1.3,
                             geometric_levels(0.1), 0.01) == 0.0


def test_content_scales_exactly_under_dyadic_rescaling():
    # Scaling points, levels can grid step by a power of two scales every
    # float exactly, so the d = 1 estimate doubles bit-for-bit.
    rng = np.random.default_rng(4)
    pts = np.cumsum(rng.normal(0.0, 0.05, size=(200, 2)), axis=0)
    eps = geometric_levels(0.08)
    base = minkowski_content(pts, 1.0, eps, 0.01)
    scaled = minkowski_content(2.0 * pts, 1.0, 2.0 * eps, 0.02)
    assert scaled == 2.0 * base


def test_resolution_validation():
    pts = _segment(101).points
    with pytest.raises(ResolutionError):
        minkowski_content(pts, 1.0, [0.1], 0.01)  # one level cannot extrapolate
    with pytest.raises(ResolutionError):
        minkowski_content(pts, 1.0, [0.1, 0.1, 0.2], 0.01)
    with pytest.raises(ResolutionError):
        minkowski_content(pts, 1.0, [0.1, 0.2], 0.05)  # grid_h > eps_min/4
    with pytest.raises(ResolutionError):
        minkowski_content(pts, 1.0, [1e-7, 2e-7], 1e-8)  # raster too large
    with pytest.raises(ResolutionError):
        geometric_levels(0.1, ratio=1.0)
    eps, h = default_resolution(2.0)
    assert np.allclose(eps, [0.1, 0.2, 0.4, 0.8])
    assert h == pytest.approx(0.1 / 8)


# ---------------------------------------------------------------------------
# content profiles


def test_profile_final_row_matches_direct_content():
    path = sample_bm(2, T=1.0, n=400, seed=2)
    eps, h = default_resolution(1.0)
    profile = content_profile(path, 4.0 / 3.0, eps, h)
    direct = minkowski_content(path.points, 4.0 / 3.0, eps, h)
    assert profile.total == pytest.approx(direct, rel=1e-12)
    assert profile.extrapolated[-1] == profile.total


def test_profile_columns_are_nondecreasing_and_start_at_zero():
    path = sample_bm(2, T=1.0, n=600, seed=3)
    eps, h = default_resolution(1.5)
    profile = content_profile(path, 4.0 / 3.0, eps, h)
    assert len(profile) == len(path)
    assert profile.levels == 4
    assert np.all(profile.content[0] == 0.0)
    assert np.all(np.diff(profile.content, axis=0) >= 0.0)


def test_profile_validation():
    times = np.array([0.0, 1.0])
    eps = np.array([0.1, 0.2])
    good = dict(prefix_times=times, content=np.array([[0.0, 0.0], [1.0, 1.0]]),
                eps_levels=eps, grid_h=0.01)
    ContentProfile(**good)
    with pytest.raises(LengthMismatch):
        ContentProfile(**{**good, "content": np.zeros((3, 2))})
    with pytest.raises(DegenerateProfile):
        ContentProfile(**{**good, "content": np.array([[0.1, 0.0], [1.0, 1.0]])})
    with pytest.raises(DegenerateProfile):
        ContentProfile(**{**good, "content": np.array([[0.0, 0.0], [-1.0, 1.0]])})
    with pytest.raises(ResolutionError):
        ContentProfile(prefix_times=times, content=np.zeros((2, 2)),
                       eps_levels=np.array([0.2, 0.1]), grid_h=0.01)


# ---------------------------------------------------------------------------
# additivity audit


def test_additivity_defect_is_the_exact_inclusion_exclusion_gap():
    path = sample_bm(2, T=1.0, n=500, seed=5)
    eps, h = default_resolution(1.0)
    rep = additivity_defect(path, 0.5, 4.0 / 3.0, eps, h)
    assert isinstance(rep, AdditivityReport)
    assert np.allclose(rep.prefix + rep.suffix - rep.whole, rep.defect,
                       rtol=1e-12)
    assert np.all(rep.defect >= 0.0)


def test_additivity_defect_grows_with_eps_on_a_smooth_curve():
    # For a segment at d = 1 the double-counted band is a disc around the
    # split point: content ~ pi eps, increasing in eps.
    rep = additivity_defect(_segment(), 0.5, 1.0, geometric_levels(0.05),
                            0.05 / 8)
    assert np.all(np.diff(rep.defect) > 0.0)
    assert rep.defect[0] == pytest.approx(np.pi * 0.05, rel=0.15)


def test_additivity_defect_validates_split_time():
    with pytest.raises(LengthMismatch):
        additivity_defect(_segment(), 1.5, 1.0, geometric_levels(0.05), 0.005)


# ---------------------------------------------------------------------------
# natural parametrization


def test_natural_reparametrize_uses_content_as_time():
    path = sample_bm(2, T=1.0, n=800, seed=7)
    eps, h = default_resolution(1.5)
    profile = content_profile(path, 4.0 / 3.0, eps, h)
    natural = natural_reparametrize(path, profile)
    assert np.all(np.diff(natural.times) > 0.0)
    assert natural.times[-1] == pytest.approx(profile.total)
    assert len(natural) <= len(path)
    # Every retained point is one of the original samples.
    orig = {tuple(p) for p in path.points}
    assert all(tuple(p) in orig for p in natural.points)


def test_natural_reparametrize_rejects_mismatched_profile():
    path = sample_bm(2, T=1.0, n=100, seed=8)
    eps, h = default_resolution(1.0)
    profile = content_profile(path, 4.0 / 3.0, eps, h)
    short = SampledPath(path.times[:-1], path.points[:-1])
    with pytest.raises(LengthMismatch):
        natural_reparametrize(short, profile)


def test_natural_reparametrize_rejects_zero_content():
    times = np.linspace(0.0, 1.0, 5)
    pts = np.zeros((5, 2))
    path = make_path(times, pts)
    profile = ContentProfile(prefix_times=times, content=np.zeros((5, 3)),
                             eps_levels=np.array([0.1, 0.2, 0.4]), grid_h=0.01)
    with pytest.raises(DegenerateProfile):
        natural_reparametrize(path, profile)
