"""Tests for geodesic integration, shooting and Jacobi fields."""

import numpy as np
import pytest

from semiriem_lab.errors import OutOfDomain, OutsideRegion
from semiriem_lab.geodesics import (
    StarRegion,
    energy_gradient,
    exp_map,
    first_order_guess,
    integrate_geodesic,
    inverse_exp,
    jacobi_transport,
    parallel_frame,
    signed_energy,
)


class TestIntegration:
    def test_minkowski_is_affine(self, minkowski2):
        assert exp_map(minkowski2, [0.0, 0.0], [3.0, 4.0]) == pytest.approx([3.0, 4.0], abs=1e-9)

    def test_zero_velocity(self, desitter3):
        q = desitter3.base_point
        assert np.array_equal(exp_map(desitter3.chart, q, np.zeros(3)), q)

    def test_speed_is_conserved(self, cosh_hyperbolic):
        chart, q = cosh_hyperbolic.chart, cosh_hyperbolic.base_point
        arc = integrate_geodesic(chart, q, [0.3, 0.2, 0.4], 1.0)
        assert arc.max_drift <= 1e-8

    def test_start_outside_domain(self, desitter3):
        with pytest.raises(OutOfDomain):
            integrate_geodesic(desitter3.chart, [0.0, -1.0, 0.0], [1.0, 0.0, 0.0], 1.0)

    def test_negative_length(self, minkowski2):
        with pytest.raises(ValueError):
            integrate_geodesic(minkowski2, [0.0, 0.0], [1.0, 0.0], -1.0)


class TestShooting:
    def test_minkowski_inverse(self, minkowski2):
        v = inverse_exp(minkowski2, [0.0, 0.0], [3.0, 4.0])
        assert v == pytest.approx([3.0, 4.0], abs=1e-7)

    def test_minkowski_energy(self, minkowski2):
        # coordinates (x, t)
        assert signed_energy(minkowski2, [0.0, 0.0], [3.0, 4.0]) == pytest.approx(-7.0, abs=1e-7)
        grad = energy_gradient(minkowski2, [0.0, 0.0], [3.0, 4.0])
        assert grad == pytest.approx([6.0, 8.0], abs=1e-6)

    def test_time_axis_is_a_geodesic(self, desitter3):
        q = desitter3.base_point
        v = inverse_exp(desitter3.chart, q, q + np.array([0.5, 0.0, 0.0]))
        assert v == pytest.approx([0.5, 0.0, 0.0], abs=1e-7)

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_round_trip(self, desitter3, seed):
        rng = np.random.default_rng(seed)
        q = desitter3.base_point
        v = StarRegion(q, 0.4).sample(rng)
        p = exp_map(desitter3.chart, q, v)
        assert inverse_exp(desitter3.chart, q, p) == pytest.approx(v, abs=1e-7)

    def test_first_order_guess_is_flat_in_minkowski(self, minkowski3):
        q, p = np.array([0.1, 0.2, 0.3]), np.array([1.0, -0.5, 2.0])
        assert first_order_guess(minkowski3, q, p) == pytest.approx(p - q, abs=1e-12)

    def test_first_order_guess_beats_displacement(self, cosh_hyperbolic):
        chart, q = cosh_hyperbolic.chart, cosh_hyperbolic.base_point
        p = exp_map(chart, q, [0.2, 0.1, 0.15])
        guess_miss = np.linalg.norm(exp_map(chart, q, first_order_guess(chart, q, p)) - p)
        flat_miss = np.linalg.norm(exp_map(chart, q, p - q) - p)
        assert guess_miss < flat_miss

    def test_shooting_across_the_angle_seam(self, desitter3):
        q = desitter3.base_point
        p = q + np.array([0.0, 0.0, 2 * np.pi - 0.3])
        assert inverse_exp(desitter3.chart, q, p) == pytest.approx([0.0, 0.0, -0.3], abs=1e-7)

    def test_outside_star_region(self, minkowski2):
        region = StarRegion(np.zeros(2), 1.0)
        with pytest.raises(OutsideRegion):
            inverse_exp(minkowski2, [0.0, 0.0], [3.0, 0.0], region=region)


class TestRegion:
    def test_membership(self):
        region = StarRegion(np.zeros(3), 0.5)
        assert region.contains([0.3, 0.0, 0.0])
        assert not region.contains([0.3, 0.3, 0.3])

    def test_radius_must_be_positive(self):
        with pytest.raises(ValueError):
            StarRegion(np.zeros(2), 0.0)


def test_jacobi_field_is_linear(desitter3):
    arc = integrate_geodesic(desitter3.chart, desitter3.base_point, [0.2, 0.3, 0.1], 1.0)
    a = jacobi_transport(arc, [0.0, 1.0, 0.0], [0.0, 0.0, 0.5])
    b = jacobi_transport(arc, [1.0, 0.0, 0.0], [0.0, 0.2, 0.0])
    ab = jacobi_transport(arc, [1.0, 1.0, 0.0], [0.0, 0.2, 0.5])
    assert ab.at(0.7) == pytest.approx(a.at(0.7) + b.at(0.7), abs=1e-8)


def test_parallel_frame_preserves_metric(desitter3):
    chart = desitter3.chart
    v0 = np.array([0.2, 0.3, 0.1])
    arc = integrate_geodesic(chart, desitter3.base_point, v0, 1.0)
    times = [0.0, 0.5, 1.0]
    frames = parallel_frame(arc, times)
    assert frames.shape == (3, 3, 3)
    assert frames[0] == pytest.approx(np.eye(3))
    g0 = chart.metric(arc.p0)
    for t, frame in zip(times, frames):
        x, v = arc.state(t)
        assert frame.T @ chart.metric(x) @ frame == pytest.approx(g0, abs=1e-7)
        # the velocity is itself parallel
        assert frame @ v0 == pytest.approx(v, abs=1e-7)


def test_parallel_frame_is_constant_in_minkowski(minkowski3):
    arc = integrate_geodesic(minkowski3, [0.1, 0.0, 0.2], [0.5, -0.3, 0.4], 1.0)
    for frame in parallel_frame(arc, [0.25, 1.0]):
        assert frame == pytest.approx(np.eye(3), abs=1e-9)
