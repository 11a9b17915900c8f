"""Tests for charts, curvature and the catalog."""

import math

import numpy as np
import pytest

from semiriem_lab.errors import DegeneratePlane, OutOfDomain, UnknownChart
from semiriem_lab.manifolds import (
    BUILTIN_IDS,
    PlaneSection,
    TangentVector,
    WarpedProductSpec,
    build_profile,
    causal_character,
    christoffel,
    christoffel_derivatives,
    curvature_vector,
    finite_difference_christoffel,
    get_catalog,
    gram_q,
    list_catalog,
    metric_eval,
    sectional_curvature,
)


def _plane(chart, x, v, w) -> PlaneSection:
    return PlaneSection(TangentVector(chart, x, v), TangentVector(chart, x, w))


class TestCharts:
    def test_minkowski_metric(self, minkowski3):
        g = metric_eval(minkowski3, [0.3, -1.0, 2.0])
        assert np.array_equal(g, np.diag([1.0, 1.0, -1.0]))
        assert minkowski3.is_lorentzian
        assert minkowski3.time_axis == 2

    def test_point_outside_domain(self, desitter3):
        with pytest.raises(OutOfDomain):
            metric_eval(desitter3.chart, [0.0, -0.5, 0.0])

    @pytest.mark.parametrize(
        "v, expected",
        [((1.0, 0.0), "spacelike"), ((0.0, 1.0), "timelike"), ((1.0, 1.0), "null")],
    )
    def test_causal_character(self, minkowski2, v, expected):
        assert causal_character(TangentVector(minkowski2, [0.0, 0.0], v), tol=1e-9) == expected

    def test_displacement_wraps_angles(self, desitter3, minkowski3):
        x = np.array([0.0, 1.0, 0.1])
        y = np.array([0.2, 1.0, 2 * math.pi - 0.1])
        assert desitter3.chart.displacement(x, y) == pytest.approx([0.2, 0.0, -0.2], abs=1e-12)
        assert minkowski3.displacement(x, y) == pytest.approx(y - x)

    def test_christoffel_matches_finite_differences(self, cosh_hyperbolic):
        x = cosh_hyperbolic.base_point + np.array([0.2, 0.1, 0.3])
        gamma = christoffel(cosh_hyperbolic.chart, x)
        assert np.allclose(gamma, np.swapaxes(gamma, 1, 2))
        fd = finite_difference_christoffel(cosh_hyperbolic.chart, x)
        assert np.max(np.abs(gamma - fd)) < 1e-6

    def test_christoffel_derivatives(self, cosh_hyperbolic):
        chart = cosh_hyperbolic.chart
        x = cosh_hyperbolic.base_point + np.array([0.2, 0.1, 0.3])
        h = 1e-4
        expected = np.stack([
            (christoffel(chart, x + h * e) - christoffel(chart, x - h * e)) / (2 * h)
            for e in np.eye(3)
        ])
        assert np.max(np.abs(christoffel_derivatives(chart, x) - expected)) < 1e-6


class TestCurvature:
    @pytest.mark.parametrize(
        "v, w", [((1.0, 0.0, 0.0), (0.0, 1.0, 0.0)), ((0.0, 1.0, 0.0), (0.0, 0.0, 1.0))]
    )
    def test_de_sitter_is_calibrated(self, desitter3, v, w):
        plane = _plane(desitter3.chart, desitter3.base_point, v, w)
        assert sectional_curvature(plane) == pytest.approx(1.0, abs=1e-6)

    def test_warped_fiber_plane(self, cosh_hyperbolic):
        # (C_F + f'^2) / f^2 at tau = 0
        plane = _plane(cosh_hyperbolic.chart, cosh_hyperbolic.base_point, (0, 1, 0), (0, 0, 1))
        assert sectional_curvature(plane) == pytest.approx(-1.0, abs=1e-6)

    def test_basis_independence(self, cosh_hyperbolic):
        x = cosh_hyperbolic.base_point + np.array([0.3, 0.0, 0.0])
        v, w = np.array([0.2, 1.0, 0.1]), np.array([1.0, 0.3, 0.5])
        before = sectional_curvature(_plane(cosh_hyperbolic.chart, x, v, w))
        after = sectional_curvature(_plane(cosh_hyperbolic.chart, x, 2 * v + w, v - 3 * w))
        assert after == pytest.approx(before, abs=1e-6)

    def test_curvature_vector_is_calibrated(self, desitter3):
        x = desitter3.base_point
        v, w = np.array([0.3, 1.0, 0.0]), np.array([0.0, 0.2, 1.0])
        rv = curvature_vector(desitter3.chart, TangentVector(desitter3.chart, x, v),
                              TangentVector(desitter3.chart, x, w))
        g = metric_eval(desitter3.chart, x)
        assert rv.components @ g @ w == pytest.approx(gram_q(g, v, w), abs=1e-6)

    def test_null_plane_is_degenerate(self, minkowski3):
        plane = _plane(minkowski3, np.zeros(3), (1.0, 0.0, 1.0), (0.0, 1.0, 0.0))
        with pytest.raises(DegeneratePlane):
            sectional_curvature(plane)


class TestProfiles:
    def test_cosh_jet(self):
        assert build_profile("cosh").jet(0.0) == pytest.approx((1.0, 0.0, 1.0))

    def test_polynomial(self):
        p = build_profile("polynomial", coefficients=[1.0, 0.0, 2.0])
        assert p.jet(1.0) == pytest.approx((3.0, 4.0, 4.0))

    def test_unknown_family(self):
        with pytest.raises(ValueError):
            build_profile("tanh")

    def test_empty_interval(self):
        with pytest.raises(ValueError):
            WarpedProductSpec((1.0, 0.0), build_profile("cosh"), 2)


class TestCatalog:
    def test_builtins_resolve(self):
        catalog = get_catalog()
        assert all(cid in catalog for cid in BUILTIN_IDS)
        assert len(catalog.entries()) == len(BUILTIN_IDS)

    def test_unknown_chart(self):
        with pytest.raises(UnknownChart):
            get_catalog().get("anti-de-sitter:7")
        assert "anti-de-sitter:7" not in get_catalog()

    def test_model_surface_curvature(self):
        entry = get_catalog().get("model-surface:K=-1,index=0")
        assert entry.chart.index == 0
        assert entry.constant_curvature == -1.0

    def test_user_registration(self):
        catalog = get_catalog()
        spec = WarpedProductSpec(
            (-math.inf, math.inf), build_profile("exp"), 2, 0.0, name="grw:exp"
        )
        entry = catalog.register_warped("grw:exp", spec, np.array([0.0, 1.0, 0.0]), 0.4)
        assert entry.provenance == "user"
        assert catalog.entries()[-1].chart_id == "grw:exp"
        catalog.clear_user()
        assert "grw:exp" not in catalog

    def test_user_ids_need_prefix(self):
        spec = WarpedProductSpec((-1.0, 1.0), build_profile("const"), 2)
        with pytest.raises(ValueError):
            get_catalog().register_warped("mine", spec, np.array([0.0, 1.0, 0.0]), 0.4)

    def test_listing_marks_user_charts(self):
        spec = WarpedProductSpec((-math.inf, math.inf), build_profile("cosh"), 2, -1.0)
        get_catalog().register_warped("grw:listed", spec, np.array([0.0, 1.0, 0.0]), 0.5)
        table = list_catalog().splitlines()
        assert table[1].startswith("minkowski:2")
        assert "user" in next(line for line in table if line.startswith("grw:listed"))
