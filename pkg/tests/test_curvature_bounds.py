"""Tests for sampled and warping-criterion curvature bounds."""

import numpy as np
import pytest

from semiriem_lab.curvature_bounds import (
    BoundQuery,
    bisect_bound,
    certify_bound,
    cross_validate_grw,
    grw_admissible,
    plane_margin,
    sample_planes,
)
from semiriem_lab.errors import DegeneratePlane
from semiriem_lab.manifolds import PlaneSection, TangentVector, get_catalog


def test_sampled_planes_are_nondegenerate(minkowski3):
    planes, rejected = sample_planes(minkowski3, 25, seed=4)
    assert len(planes) == 25
    assert rejected >= 0
    assert all(abs(p.q) > 1e-6 for p in planes)


def test_degenerate_plane_margin(minkowski3):
    x = np.zeros(3)
    plane = PlaneSection(TangentVector(minkowski3, x, [1.0, 0.0, 1.0]),
                         TangentVector(minkowski3, x, [0.0, 1.0, 0.0]))
    with pytest.raises(DegeneratePlane):
        plane_margin(plane, 0.0)


class TestSampledBounds:
    @pytest.mark.parametrize("direction", ["upper", "lower"])
    def test_de_sitter_both_directions(self, desitter3, direction):
        report = certify_bound(BoundQuery(desitter3.chart, 1.0, direction, n_samples=60, seed=1))
        assert report.status == "pass"
        assert report.witness is not None

    def test_flat_bound_holds(self, minkowski3):
        report = certify_bound(BoundQuery(minkowski3, 0.0, n_samples=30))
        assert report.status == "pass"
        assert report.min_margin == pytest.approx(0.0, abs=1e-12)

    def test_flat_fails_positive_upper_bound(self, minkowski3):
        # K Q has both signs on Minkowski space
        report = certify_bound(BoundQuery(minkowski3, 1.0, n_samples=60))
        assert report.status == "fail"
        assert report.witness.plane_class == "timelike"

    def test_invalid_query(self, minkowski3):
        with pytest.raises(ValueError):
            BoundQuery(minkowski3, 0.0, n_samples=0)

    def test_bisection_without_flip(self, desitter3):
        # only K = 1 holds on de Sitter space, so both ends fail
        report = bisect_bound(desitter3.chart, 0.0, 3.0, "upper", n_samples=40, seed=2)
        assert report.verdict == "NO-FLIP"
        assert report.details["bracket"] == [0.0, 3.0]


class TestWarpingCriterion:
    @pytest.mark.parametrize("direction", ["upper", "lower"])
    def test_de_sitter(self, desitter3, direction):
        assert grw_admissible(desitter3.warped, 1.0, direction).status == "pass"

    def test_cosh_hyperbolic_upper_only(self, cosh_hyperbolic):
        upper = grw_admissible(cosh_hyperbolic.warped, 1.0, "upper")
        lower = grw_admissible(cosh_hyperbolic.warped, 1.0, "lower")
        assert upper.status == "pass"
        assert lower.status == "fail"
        assert lower.details["worst_condition"] == "fiber"

    def test_cross_validation_agrees(self, desitter3):
        report = cross_validate_grw(desitter3.warped, 1.0, "upper", n_samples=100, seed=0,
                                    chart_id="desitter:3")
        assert report.status == "pass"
        assert report.verdict == "AGREE-PASS"

    @pytest.mark.slow
    def test_cross_validation_refutation_agrees(self, cosh_hyperbolic):
        report = cross_validate_grw(cosh_hyperbolic.warped, 1.0, "lower", n_samples=400, seed=0)
        assert report.verdict == "AGREE-FAIL"


def test_static_product_lacks_lower_bound():
    entry = get_catalog().get("grw:static-hyperbolic")
    assert grw_admissible(entry.warped, -1.0, "upper").status == "pass"
    assert grw_admissible(entry.warped, -1.0, "lower").status == "fail"
