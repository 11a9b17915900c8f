"""Tests for immersed patches, mean curvature and the obstruction audits."""

import math

import numpy as np
import pytest

from semiriem_lab.convexity import ComparisonField
from semiriem_lab.errors import SpacelikeViolation
from semiriem_lab.geodesics import StarRegion
from semiriem_lab.manifolds import get_catalog
from semiriem_lab.submanifolds import (
    audit_obstruction,
    classify_trapped,
    closed_geodesic,
    compact_maximum_check,
    geodesic_segment,
    hyperboloid,
    induced_metric,
    mean_curvature,
    restricted_laplacian,
    round_sphere,
    second_fundamental_form,
    slice_patch,
)

SMALL_BOX = ((-0.5, 0.5), (-0.5, 0.5))

CURVED_PATCHES = [
    ("minkowski:3", lambda chart: round_sphere(chart, 1.0)),
    ("minkowski:4", lambda chart: round_sphere(chart, 1.0)),
    ("minkowski:3", lambda chart: hyperboloid(chart, 1, 0.0, SMALL_BOX)),
    ("minkowski:3", lambda chart: hyperboloid(chart, -1, 0.0, SMALL_BOX)),
]


class TestExtrinsic:
    def test_slice_is_totally_geodesic(self, minkowski3):
        data = second_fundamental_form(slice_patch(minkowski3, 0.0, SMALL_BOX), [0.2, -0.1])
        assert np.allclose(data.II, 0.0)
        assert classify_trapped(data) == "zero_H"

    def test_circle_mean_curvature(self, minkowski3):
        patch = round_sphere(minkowski3, 2.0)
        H = mean_curvature(patch, [0.0])
        assert H == pytest.approx([0.5, 0.0, 0.0], abs=1e-10)
        assert mean_curvature(patch, [0.0], np.array([[-0.5]])) == pytest.approx(H, abs=1e-10)
        assert classify_trapped(second_fundamental_form(patch, [0.0])) == "untrapped_spacelike_H"

    def test_sphere_mean_curvature_points_inward(self, minkowski4):
        patch = round_sphere(minkowski4, 1.0)
        u = [math.pi / 2, 0.0]
        assert mean_curvature(patch, u) == pytest.approx(patch.point(u), abs=1e-10)

    @pytest.mark.parametrize(
        "sign, expected", [(-1, "weakly_future_trapped"), (1, "weakly_past_trapped")]
    )
    def test_hyperboloid_sheets(self, minkowski3, sign, expected):
        data = second_fundamental_form(hyperboloid(minkowski3, sign), [0.0, 0.0])
        assert classify_trapped(data) == expected
        assert data.tangential_residual <= 1e-10

    def test_timelike_curve_is_rejected(self, minkowski3):
        patch = geodesic_segment(minkowski3, [0.0, 0.0, 0.0], [0.0, 0.0, 1.0], 1.0)
        with pytest.raises(SpacelikeViolation):
            induced_metric(patch, [0.5])


class TestLaplacian:
    def test_slice_laplacian(self, minkowski3, flat_field):
        # u = |x|^2 / 2 on the slice through q
        patch = slice_patch(minkowski3, 0.0, SMALL_BOX)
        sample = restricted_laplacian(patch, flat_field, [0.3, 0.1])
        assert sample.direct == pytest.approx(2.0, abs=1e-5)
        assert sample.residual <= 1e-5

    @pytest.mark.parametrize(
        "chart_id, build", CURVED_PATCHES, ids=["circle", "sphere", "future-sheet", "past-sheet"]
    )
    def test_identity_on_curved_patches(self, chart_id, build):
        chart = get_catalog().get(chart_id).chart
        patch = build(chart)
        q = 0.1 * np.arange(1, chart.dim + 1)
        field = ComparisonField(chart, q, 0.0, StarRegion(q, 4.0))
        for u in patch.grid(3):
            sample = restricted_laplacian(patch, field, u)
            assert np.linalg.norm(sample.extrinsic.H) > 0.1
            assert sample.residual <= 1e-5


class TestAudit:
    def test_slice_is_obstructed(self, minkowski3, flat_field):
        patch = slice_patch(minkowski3, 0.0, SMALL_BOX)
        report = audit_obstruction(patch, flat_field, "minimal", grid_n=4)
        assert report.status == "pass"
        assert report.verdict == "OBSTRUCTED"
        assert report.details["classes"] == ["zero_H"]

    def test_circle_fails_trapped_hypothesis(self, minkowski3, flat_field):
        report = audit_obstruction(round_sphere(minkowski3, 1.0), flat_field, "trapped", grid_n=6)
        assert report.status == "hypothesis_failed"
        assert "not weakly future-trapped" in report.reasons
        assert report.details["classes"] == ["untrapped_spacelike_H"]

    def test_spacelike_segment_meets_equality(self, minkowski3, flat_field):
        patch = geodesic_segment(minkowski3, [0.2, 0.1, 0.0], [1.0, 0.0, 0.0], 1.0)
        report = audit_obstruction(patch, flat_field, "trapped", grid_n=5)
        assert report.verdict == "OBSTRUCTED"
        assert report.min_margin == pytest.approx(0.0, abs=1e-5)

    def test_timelike_patch_fails_hypothesis(self, minkowski3, flat_field):
        patch = geodesic_segment(minkowski3, [0.0, 0.0, 0.0], [0.0, 0.0, 1.0], 1.0)
        report = audit_obstruction(patch, flat_field, "trapped", grid_n=3)
        assert report.status == "hypothesis_failed"
        assert report.reasons == ["patch is not spacelike"]


class TestCompactMaximum:
    def test_needs_closed_patch(self, minkowski3, flat_field):
        with pytest.raises(ValueError):
            compact_maximum_check(slice_patch(minkowski3, 0.0, SMALL_BOX), flat_field)

    def test_circle_around_q(self, minkowski3, flat_field):
        # u is constant on the circle
        report = compact_maximum_check(round_sphere(minkowski3, 1.0), flat_field, grid_n=12)
        assert report.verdict == "CONSISTENT"
        assert report.details["checklist"] == "HYPOTHESIS_FAILED"

    def test_open_geodesic_is_not_closed(self, minkowski3):
        with pytest.raises(ValueError):
            closed_geodesic(minkowski3, [0.0, 0.0, 0.0], [1.0, 0.0, 0.0], 1.0)

    def test_de_sitter_equator_closes(self, desitter3):
        patch = closed_geodesic(desitter3.chart, desitter3.base_point, [0.0, 0.0, 1.0], 2 * math.pi)
        assert patch.is_compact
        assert patch.info["closure"] <= 1e-6

    def test_model_sphere_great_circle_closes(self):
        chart = get_catalog().get("model-surface:K=1,index=0").chart
        patch = closed_geodesic(chart, [math.pi / 2, 0.0], [0.0, 1.0], 2 * math.pi)
        assert patch.is_compact

    def test_equator_fails_the_checklist(self, desitter3):
        chart, q = desitter3.chart, desitter3.base_point
        patch = closed_geodesic(chart, q, [0.0, 0.0, 1.0], 2 * math.pi)
        # u = sin(s)^2 / 2 along the equator, largest at s = pi/2
        field = ComparisonField(chart, q, 4.0, StarRegion(q, 4.0))
        report = compact_maximum_check(patch, field, grid_n=9)
        assert report.details["checklist"] == "HYPOTHESIS_FAILED"
        assert report.verdict == "CONSISTENT"
        s = float(report.details["u_max_param"][0]) % (2 * math.pi)
        assert min(abs(s - math.pi / 2), abs(s - 3 * math.pi / 2)) < 1e-2
