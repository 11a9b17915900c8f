"""Tests for comparison functions, Hessians, certification and shape-operator tracks."""

import math

import numpy as np
import pytest

from semiriem_lab.convexity import (
    ComparisonField,
    box_sampler,
    certify_lambda_convex,
    certify_spacetime_convex,
    comparison_spacetime_region,
    coordinate_hessian,
    energy_bound,
    energy_bound_slack,
    f_closed,
    f_derivative,
    f_series,
    f_value,
    gi_warped_candidate,
    hessian_quadratic_form,
    lambda_value,
    minkowski_quadratic,
    positive_quadratic,
    second_derivative,
    shape_operator_track,
    star_sampler,
    track_report,
)
from semiriem_lab.errors import OutsideRegion
from semiriem_lab.geodesics import StarRegion
from semiriem_lab.manifolds import get_catalog


class TestComparisonFunction:
    def test_flat_case_is_half_energy(self):
        assert f_value(0.0, 3.0) == 1.5
        assert f_value(0.0, -2.0) == -1.0

    @pytest.mark.parametrize("K", [-1.0, -0.5, 0.5, 1.0])
    @pytest.mark.parametrize("E", [-0.9, -0.3, 0.1, 0.8])
    def test_series_matches_closed_form(self, K, E):
        assert f_closed(K, E) == pytest.approx(f_series(K, E, 20), abs=1e-12)

    def test_lambda_is_cosine(self):
        assert lambda_value(1.0, 0.0) == 1.0
        assert lambda_value(1.0, (math.pi / 2) ** 2) == pytest.approx(0.0, abs=1e-12)
        assert lambda_value(-1.0, 1.0) == pytest.approx(math.cosh(1.0))

    def test_energy_bounds(self):
        assert energy_bound(0.0) == math.inf
        assert energy_bound(1.0) == pytest.approx(math.pi**2)
        assert energy_bound(1.0, "quarter") == pytest.approx(math.pi**2 / 4)
        assert energy_bound_slack(-1.0, -1.0) > 0
        assert energy_bound_slack(-1.0, -11.0) < 0

    @pytest.mark.parametrize("K, E", [(1.0, 1.0), (-1.0, 2.0), (0.5, 1e-3)])
    def test_derivatives(self, K, E):
        h = 1e-5
        d1 = (f_value(K, E + h) - f_value(K, E - h)) / (2 * h)
        d2 = (f_value(K, E + h) - 2 * f_value(K, E) + f_value(K, E - h)) / h**2
        assert f_derivative(K, E, 0) == pytest.approx(f_value(K, E), abs=1e-14)
        assert f_derivative(K, E, 1) == pytest.approx(d1, abs=1e-8)
        assert f_derivative(K, E, 2) == pytest.approx(d2, abs=1e-4)

    def test_derivatives_at_the_vertex(self):
        assert f_derivative(1.0, 0.0, 1) == 0.5
        assert f_derivative(1.0, 0.0, 2) == pytest.approx(-1.0 / 12.0)
        assert f_derivative(1.0, 1.0, 2) == pytest.approx((math.cos(1.0) - math.sin(1.0)) / 4.0)
        with pytest.raises(ValueError):
            f_derivative(1.0, 0.5, -1)


class TestHessian:
    def test_flat_hessian_is_metric(self, flat_field):
        p = np.array([0.4, -0.2, 0.3])
        hs = hessian_quadratic_form(flat_field, p, [0.3, 1.0, 0.2])
        assert hs.g_vv == 1.0
        assert hs.value == pytest.approx(1.0, abs=1e-6)

    def test_coordinate_hessian_agrees(self, flat_field):
        p = np.array([0.4, -0.2, 0.3])
        expected = np.diag([1.0, 1.0, -1.0])
        assert coordinate_hessian(flat_field, p) == pytest.approx(expected, abs=1e-6)

    @pytest.mark.parametrize("chart_id, K", [("minkowski:3", 0.0), ("desitter:3", 1.0)])
    def test_constant_curvature_identity(self, field_for, chart_id, K):
        field = field_for(get_catalog().get(chart_id), K)
        report = certify_lambda_convex(field, star_sampler(field), 8, seed=3)
        assert report.status == "pass"
        assert abs(report.min_margin) <= 1e-5
        assert abs(report.max_margin) <= 1e-5

    @pytest.mark.parametrize("K", [-1.0, 0.0, 1.0])
    def test_vertex_behavior(self, desitter3, field_for, K):
        q = desitter3.base_point
        value, _ = second_derivative(field_for(desitter3, K), q, [1.0, 0.0, 0.0])
        assert value == pytest.approx(-1.0, abs=1e-5)

    def test_points_outside_the_star_region(self, minkowski3):
        q = np.zeros(3)
        field = ComparisonField(minkowski3, q, 0.0, StarRegion(q, 0.5))
        assert field.value([0.3, 0.0, 0.0]) == pytest.approx(0.045, abs=1e-9)
        with pytest.raises(OutsideRegion):
            field.value([1.0, 0.0, 0.0])

    def test_star_samples_keep_clear_of_the_boundary(self, flat_field):
        sample = star_sampler(flat_field)
        rng = np.random.default_rng(0)
        for _ in range(20):
            assert np.linalg.norm(sample(rng).guess) <= 0.95 * flat_field.region.radius + 1e-12


class TestCertification:
    def test_positive_quadratic_is_convex_but_not_spacetime_convex(self, minkowski3):
        field = positive_quadratic(minkowski3)
        assert certify_lambda_convex(field, box_sampler(minkowski3), 10, seed=2).status == "pass"
        report = certify_spacetime_convex(field, box_sampler(minkowski3), 10, seed=2)
        assert report.status == "fail"
        assert report.reasons == ["signature"]

    def test_quadratic_spacetime_convex(self, minkowski3):
        report = certify_spacetime_convex(
            minkowski_quadratic(minkowski3, 0.5), box_sampler(minkowski3), 10, seed=1
        )
        assert report.status == "pass"

    def test_quadratic_too_concave_in_time(self, minkowski3):
        report = certify_spacetime_convex(
            minkowski_quadratic(minkowski3, 2.0), box_sampler(minkowski3), 10, seed=1
        )
        assert report.status == "fail"
        assert "margin" in report.reasons

    def test_flat_comparison_function_is_spacetime_convex(self, minkowski3):
        report = comparison_spacetime_region(minkowski3, 0.0, [0.0, 0.0, 0.0], 1.0, 8, seed=3)
        assert report.status == "pass"
        assert report.min_margin == pytest.approx(0.0, abs=1e-5)

    def test_gi_region_quarter_interval(self):
        spec = get_catalog().get("grw:gi-sin-hyperbolic").warped
        report = gi_warped_candidate(spec, (0.0, math.pi / 4), n_samples=12, seed=0)
        assert report.status == "pass"
        assert report.details["lorentzian_window"] is not None

    def test_gi_region_half_interval_loses_signature(self):
        # f'^2 + f f'' = cos(2 tau) changes sign at pi/4
        spec = get_catalog().get("grw:gi-sin-hyperbolic").warped
        report = gi_warped_candidate(spec, (0.0, math.pi / 2), n_samples=40, seed=0)
        assert report.status == "fail"
        assert "signature" in report.reasons


class TestShapeOperator:
    def test_flat_track_matches_model(self, flat_field):
        track = shape_operator_track(flat_field, [1.0, 0.0, 0.0], 1.0, n_times=3)
        assert track.S == pytest.approx(np.stack([np.eye(3)] * 3), abs=1e-5)
        assert track.min_margin == pytest.approx(0.0, abs=1e-5)
        report = track_report(flat_field, [track])
        assert report.status == "pass"

    def test_null_direction_rejected(self, flat_field):
        with pytest.raises(ValueError):
            shape_operator_track(flat_field, [1.0, 0.0, 1.0], 1.0)

    @pytest.mark.slow
    def test_cosh_hyperbolic_comparison(self, cosh_hyperbolic, field_for):
        field = field_for(cosh_hyperbolic, 1.0)
        track = shape_operator_track(field, [1.0, 0.0, 0.0], 0.4, n_times=4)
        assert track.min_margin >= -1e-5
