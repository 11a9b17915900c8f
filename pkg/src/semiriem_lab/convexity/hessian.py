"""Hessians of scalar fields by geodesic stencils, with a coordinate cross-check."""

from dataclasses import dataclass
from typing import Literal

import numpy as np

from semiriem_lab.config import get_settings
from semiriem_lab.convexity.comparison import ScalarField
from semiriem_lab.errors import DomainTooTight, LeftDomain, OutsideRegion
from semiriem_lab.geodesics import integrate_geodesic
from semiriem_lab.manifolds.chart import FD_STEP, christoffel

Stencil = Literal["gradient", "values"]


@dataclass(frozen=True)
class HessianSample:
    """(f o gamma_v)''(0) for a direction normalized to |g(v,v)| in {0, 1}."""

    point: np.ndarray
    direction: np.ndarray
    value: float
    g_vv: float
    error: float = 0.0


def _central_first(values: dict[float, float], s: float) -> float:
    return (-values[2 * s] + 8 * values[s] - 8 * values[-s] + values[-2 * s]) / (12.0 * s)


def _central_second(values: dict[float, float], s: float) -> float:
    return (
        -values[2 * s] + 16 * values[s] - 30 * values[0.0] + 16 * values[-s] - values[-2 * s]
    ) / (12.0 * s * s)


def _stencil_values(field: ScalarField, p: np.ndarray, v: np.ndarray, h: float,
                    stencil: Stencil, guess=None) -> dict[float, float]:
    """Evaluate the stencil quantity at t in {0, +-h/2, +-h, +-2h} along gamma_v."""
    chart = field.chart
    offsets = [h / 2, h, 2 * h]
    center = field.jet(p, guess=guess)
    near = center.shooting
    samples: dict[float, float] = {}
    if stencil == "values":
        samples[0.0] = center.value
    for sign in (1.0, -1.0):
        try:
            arc = integrate_geodesic(chart, p, sign * v, 2 * h)
        except LeftDomain as e:
            raise DomainTooTight(f"stencil geodesic left the domain at t={e.t_exit:.3g}") from e
        for t in offsets:
            x, xdot = arc.state(t)
            try:
                jet = field.jet(x, near=near)
            except (LeftDomain, OutsideRegion) as e:
                raise DomainTooTight(f"stencil point {x.tolist()} unreachable: {e}") from e
            if stencil == "values":
                samples[sign * t] = jet.value
            else:
                samples[sign * t] = float(jet.differential @ (sign * xdot))
    return samples


def second_derivative(field: ScalarField, p, v, stencil: Stencil = "gradient",
                      step: float | None = None, guess=None) -> tuple[float, float]:
    """
    (f o gamma_v)''(0) for an unnormalized v, with a Richardson error estimate.

    The gradient stencil differentiates t -> df(gamma'(t)) once; the values stencil
    differentiates t -> f(gamma(t)) twice.
    """
    p = np.asarray(p, dtype=float)
    v = np.asarray(v, dtype=float)
    if not np.any(v):
        return 0.0, 0.0
    settings = get_settings()
    h = (settings.hessian_step if step is None else step) * field.scale
    samples = _stencil_values(field, p, v, h, stencil, guess=guess)
    diff = _central_first if stencil == "gradient" else _central_second
    coarse = diff(samples, h)
    fine = diff(samples, h / 2)
    return (16.0 * fine - coarse) / 15.0, abs(fine - coarse) / 15.0


def hessian_quadratic_form(field: ScalarField, p, v, stencil: Stencil = "gradient",
                           step: float | None = None, guess=None) -> HessianSample:
    """
    Hess f(v, v) at p along the geodesic gamma_v, with v normalized to |g(v,v)| = 1
    (or to unit coordinate length when v is null).

    Raises:
        DomainTooTight: If the stencil geodesic exits the domain or the field's region
    """
    p = np.asarray(p, dtype=float)
    v = np.asarray(v, dtype=float)
    chart = field.chart
    tol = get_settings().causal_tol
    gvv = chart.inner(p, v, v)
    if abs(gvv) > tol:
        v = v / np.sqrt(abs(gvv))
        gvv = float(np.sign(gvv))
    else:
        v = v / np.linalg.norm(v)
        gvv = 0.0
    value, error = second_derivative(field, p, v, stencil, step, guess=guess)
    return HessianSample(point=p, direction=v, value=value, g_vv=gvv, error=error)


def hessian_matrix(field: ScalarField, p, stencil: Stencil = "gradient",
                   step: float | None = None, guess=None) -> np.ndarray:
    """Coordinate components of Hess f at p, assembled by polarization over the coordinate frame."""
    p = np.asarray(p, dtype=float)
    n = field.chart.dim
    eye = np.eye(n)
    diag = [second_derivative(field, p, eye[i], stencil, step, guess)[0] for i in range(n)]
    hess = np.diag(diag)
    for i in range(n):
        for j in range(i + 1, n):
            plus = second_derivative(field, p, eye[i] + eye[j], stencil, step, guess)[0]
            minus = second_derivative(field, p, eye[i] - eye[j], stencil, step, guess)[0]
            hess[i, j] = hess[j, i] = (plus - minus) / 4.0
    return hess


def coordinate_hessian(field: ScalarField, p, step: float | None = None) -> np.ndarray:
    """d_i d_j f - Gamma^k_ij d_k f from central differences of the differential."""
    p = np.asarray(p, dtype=float)
    n = field.chart.dim
    h = FD_STEP * 10.0 * field.scale if step is None else step
    df = field.differential(p)
    second = np.zeros((n, n))
    for i in range(n):
        e = np.zeros(n)
        e[i] = h
        second[i] = (
            -field.differential(p + 2 * e)
            + 8 * field.differential(p + e)
            - 8 * field.differential(p - e)
            + field.differential(p - 2 * e)
        ) / (12.0 * h)
    second = 0.5 * (second + second.T)
    gamma = christoffel(field.chart, p)
    return second - np.einsum("kij,k->ij", gamma, df)
