"""Tests for model surfaces, model triangles and triangle comparison."""

import math

import numpy as np
import pytest

from semiriem_lab.errors import BranchAmbiguity, DegenerateTriangle
from semiriem_lab.triangles import (
    build_triangle,
    compare_triangle,
    compare_triangles,
    energy_from_chord,
    energy_of_length,
    falsify_bound,
    model_energy,
    realize_model_triangle,
    sample_triangles,
    signed_length,
)


class TestModelEnergy:
    def test_flat_plane(self):
        assert model_energy(0.0, "riemannian", [0.0, 0.0], [3.0, 0.0]) == pytest.approx(9.0)

    def test_quarter_great_circle(self):
        E = model_energy(1.0, "riemannian", [1.0, 0.0, 0.0], [0.0, 1.0, 0.0])
        assert E == pytest.approx((math.pi / 2) ** 2)

    def test_unit_timelike_on_de_sitter_quadric(self):
        b = [math.cosh(1.0), 0.0, math.sinh(1.0)]
        assert model_energy(1.0, "lorentzian", [1.0, 0.0, 0.0], b) == pytest.approx(-1.0)

    def test_beyond_principal_branch(self):
        with pytest.raises(BranchAmbiguity):
            energy_from_chord(1.0, 2.0)

    def test_length_encoding_is_monotone(self):
        lengths = np.linspace(-3.0, 3.0, 61)
        energies = [energy_of_length(x) for x in lengths]
        assert all(a < b for a, b in zip(energies, energies[1:]))
        assert signed_length(energy_of_length(-1.5)) == pytest.approx(-1.5)


class TestRealization:
    def test_flat_equilateral(self):
        model = realize_model_triangle(0.0, 9.0, 9.0, 9.0)
        assert model.signature == "riemannian"
        v = model.vertices
        assert model.energy(v[1], v[2]) == pytest.approx(9.0, abs=1e-9)

    def test_flat_timelike_edges(self):
        model = realize_model_triangle(0.0, -1.0, -1.0, 0.5)
        assert model.signature == "lorentzian"
        assert model.energy(model.vertices[1], model.vertices[2]) == pytest.approx(0.5, abs=1e-9)

    @pytest.mark.parametrize(
        "K, energies",
        [(1.0, (0.3, -0.2, 0.4)), (-1.0, (0.25, 0.3, 0.2)), (1.0, (0.2, 0.3, 0.25))],
    )
    def test_round_trip(self, K, energies):
        model = realize_model_triangle(K, *energies)
        v = model.vertices
        recovered = (model.energy(v[0], v[1]), model.energy(v[0], v[2]), model.energy(v[1], v[2]))
        assert recovered == pytest.approx(energies, abs=1e-9)
        assert model.quadric_residual() <= 1e-12

    def test_null_side(self):
        with pytest.raises(DegenerateTriangle):
            realize_model_triangle(1.0, 0.0, 0.2, 0.3)

    def test_side_points_stay_on_quadric(self):
        model = realize_model_triangle(1.0, 0.3, -0.2, 0.4)
        x = model.side_point(2, 0.37)
        assert float(np.sum(model.eta * x * x)) == pytest.approx(1.0, abs=1e-12)
        with pytest.raises(ValueError):
            model.side_point(0, 1.2)


class TestComparison:
    def test_minkowski_triangle_is_its_own_model(self, minkowski3):
        triangle = build_triangle(minkowski3, [0.0, 0.0, 0.0], [1.0, 0.2, 0.1], [0.3, 1.1, -0.2])
        report = compare_triangle(minkowski3, 0.0, triangle)
        assert report.status == "pass"
        assert abs(report.min_margin) <= 1e-8
        assert abs(report.max_margin) <= 1e-8

    def test_vertex_pairs_match_side_energies(self, minkowski3):
        triangle = build_triangle(minkowski3, [0.0, 0.0, 0.0], [1.0, 0.2, 0.1], [0.3, 1.1, -0.2])
        pairs = [((0, 0.0), (0, 1.0)), ((1, 0.0), (2, 1.0))]
        report = compare_triangle(minkowski3, 0.0, triangle, pairs)
        first = report.series["pairs"].rows[0]
        assert first[4] == pytest.approx(triangle.side_energies[0], abs=1e-8)
        assert abs(report.min_margin) <= 1e-8

    def test_null_side_rejected(self, minkowski3):
        with pytest.raises(DegenerateTriangle):
            build_triangle(minkowski3, [0.0, 0.0, 0.0], [1.0, 0.0, 1.0], [0.0, 1.0, 0.0])

    def test_de_sitter_equality(self, desitter3):
        triangles = sample_triangles(desitter3.chart, desitter3.base_point, 0.4, 2, seed=5)
        report = compare_triangles(desitter3.chart, 1.0, triangles, n_pairs=2, seed=5)
        assert report.status == "pass"
        assert abs(report.min_margin) <= 1e-5
        assert abs(report.max_margin) <= 1e-5

    def test_falsifier_never_certifies(self, desitter3):
        triangles = sample_triangles(desitter3.chart, desitter3.base_point, 0.4, 1, seed=2)
        report = falsify_bound(desitter3.chart, 1.0, "upper", triangles)
        assert report.kind == "triangle-falsifier"
        assert report.verdict == "INCONCLUSIVE"

    @pytest.mark.slow
    def test_cosh_hyperbolic_upper_bound(self, cosh_hyperbolic):
        chart, q = cosh_hyperbolic.chart, cosh_hyperbolic.base_point
        triangles = sample_triangles(chart, q, 0.5, 5, seed=1)
        report = compare_triangles(chart, 1.0, triangles, n_pairs=3, seed=1)
        assert report.min_margin >= -1e-5
