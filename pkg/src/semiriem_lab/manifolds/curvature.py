"""Riemann tensor, calibrated curvature operator, sectional curvature, causal character."""

from typing import Literal

import numpy as np

from semiriem_lab.config import get_settings
from semiriem_lab.errors import OutOfDomain
from semiriem_lab.manifolds.chart import (
    MetricChart,
    PlaneSection,
    TangentVector,
    christoffel_with_derivatives,
)

CausalCharacter = Literal["spacelike", "null", "timelike"]


def riemann_tensor(chart: MetricChart, x) -> np.ndarray:
    """
    Coordinate Riemann tensor R[l,k,i,j] with R(d_i, d_j) d_k = R^l_kij d_l.

    Uses R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z.
    """
    x = np.asarray(x, dtype=float)
    if not chart.contains(x, margin=chart.stencil_width):
        raise OutOfDomain(f"{chart.name}: point {x.tolist()} not interior")
    gamma, d_gamma = christoffel_with_derivatives(chart, x)
    return (
        np.einsum("iljk->lkij", d_gamma)
        - np.einsum("jlik->lkij", d_gamma)
        + np.einsum("lim,mjk->lkij", gamma, gamma)
        - np.einsum("ljm,mik->lkij", gamma, gamma)
    )


def curvature_operator(riemann: np.ndarray, a, b, c) -> np.ndarray:
    """
    Calibrated curvature R(a,b)c, equal to the standard R(b,a)c.

    With this sign g(R(v,w)v, w) = K Q(v,w) on a space of constant curvature K, and the
    Jacobi equation reads J'' + R(gamma', J) gamma' = 0.
    """
    return np.einsum("lkij,k,i,j->l", riemann, c, b, a)


def curvature_vector(chart: MetricChart, v: TangentVector, w: TangentVector) -> TangentVector:
    """Return R(v,w)v at the common base point."""
    if not np.allclose(v.point, w.point, rtol=0.0, atol=1e-14):
        raise ValueError("v and w must share a base point")
    riemann = riemann_tensor(chart, v.point)
    return TangentVector(
        chart, v.point, curvature_operator(riemann, v.components, w.components, v.components)
    )


def curvature_numerator(chart: MetricChart, x, v, w, riemann: np.ndarray | None = None) -> float:
    """g(R(v,w)v, w)."""
    x = np.asarray(x, dtype=float)
    if riemann is None:
        riemann = riemann_tensor(chart, x)
    rv = curvature_operator(riemann, v, w, v)
    return float(rv @ chart.metric(x) @ np.asarray(w, dtype=float))


def sectional_curvature(plane: PlaneSection, tol: float | None = None) -> float:
    """
    Sectional curvature g(R(v,w)v,w) / Q(v,w) of a nondegenerate plane.

    Raises:
        DegeneratePlane: If |Q| is below tolerance
    """
    tol = get_settings().plane_tol if tol is None else tol
    q = plane.require_nondegenerate(tol)
    numerator = curvature_numerator(
        plane.chart, plane.point, plane.v.components, plane.w.components
    )
    return numerator / q


def causal_character(v: TangentVector, tol: float | None = None) -> CausalCharacter:
    """Classify a vector of a Lorentzian chart as spacelike, null or timelike."""
    if not v.chart.is_lorentzian:
        raise ValueError(f"chart {v.chart.name} is not Lorentzian")
    tol = get_settings().causal_tol if tol is None else tol
    gvv = v.norm2()
    if gvv > tol:
        return "spacelike"
    if gvv < -tol:
        return "timelike"
    return "null"
