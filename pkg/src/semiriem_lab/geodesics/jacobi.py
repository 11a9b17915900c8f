"""Variational equations along geodesics: Jacobi fields and parallel frames."""

from dataclasses import dataclass

import numpy as np
from scipy.integrate import OdeSolution

from semiriem_lab.config import get_settings
from semiriem_lab.errors import OutOfDomain
from semiriem_lab.geodesics.integrator import GeodesicArc, solve_geodesic_system
from semiriem_lab.manifolds.chart import MetricChart, christoffel_fast, christoffel_with_derivatives
from semiriem_lab.observability import GEODESIC_INTEGRATIONS


def variational_rhs(chart: MetricChart, m: int):
    """
    Geodesic flow together with its linearization on m columns.

    State layout is (x, v, dX, dV) with dX, dV of shape (n, m) flattened row-major.
    dX' = dV and dV^k = -d_l Gamma^k_ij dX^l v^i v^j - 2 Gamma^k_ij v^i dV^j.
    """
    n = chart.dim

    def rhs(t: float, y: np.ndarray) -> np.ndarray:
        x, v = y[:n], y[n : 2 * n]
        dx = y[2 * n : 2 * n + n * m].reshape(n, m)
        dv = y[2 * n + n * m :].reshape(n, m)
        gamma, d_gamma = christoffel_with_derivatives(chart, x)
        acc = -np.einsum("kij,i,j->k", gamma, v, v)
        ddv = -np.einsum("lkij,la,i,j->ka", d_gamma, dx, v, v) - 2.0 * np.einsum(
            "kij,i,ja->ka", gamma, v, dv
        )
        return np.concatenate([v, acc, dv.ravel(), ddv.ravel()])

    return rhs


@dataclass(frozen=True, eq=False)
class VariationalSolution:
    """Dense solution of the geodesic flow and its linearization on m columns."""

    chart: MetricChart
    t_max: float
    columns: int
    solution: OdeSolution

    def unpack(self, t: float) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        n, m = self.chart.dim, self.columns
        y = self.solution(t)
        return (
            y[:n],
            y[n : 2 * n],
            y[2 * n : 2 * n + n * m].reshape(n, m),
            y[2 * n + n * m :].reshape(n, m),
        )


def integrate_variational(
    chart: MetricChart,
    p0,
    v0,
    t_max: float,
    dx0: np.ndarray,
    dv0: np.ndarray,
    tol: float | None = None,
    method: str | None = None,
) -> VariationalSolution:
    """
    Integrate the geodesic from (p0, v0) with the variations (dx0, dv0) of shape (n, m).

    Raises:
        OutOfDomain, LeftDomain, StepSizeUnderflow
    """
    settings = get_settings()
    tol = settings.geodesic_tol if tol is None else tol
    method = settings.geodesic_method if method is None else method
    p0 = np.asarray(p0, dtype=float)
    v0 = np.asarray(v0, dtype=float)
    dx0 = np.atleast_2d(np.asarray(dx0, dtype=float).T).T
    dv0 = np.atleast_2d(np.asarray(dv0, dtype=float).T).T
    if not chart.contains(p0):
        raise OutOfDomain(f"{chart.name}: start point {p0.tolist()} outside domain")
    m = dx0.shape[1]
    y0 = np.concatenate([p0, v0, dx0.ravel(), dv0.ravel()])
    sol = solve_geodesic_system(chart, variational_rhs(chart, m), y0, t_max, tol, method)
    GEODESIC_INTEGRATIONS.labels(kind="variational").inc()
    return VariationalSolution(chart, float(t_max), m, sol.sol)


@dataclass(frozen=True, eq=False)
class JacobiField:
    """A Jacobi field J along an arc, with its covariant derivative J'."""

    arc: GeodesicArc
    variation: VariationalSolution

    def at(self, t: float) -> np.ndarray:
        return self.variation.unpack(t)[2][:, 0].copy()

    def derivative(self, t: float) -> np.ndarray:
        """Covariant derivative DJ/dt = dV + Gamma(gamma', J)."""
        x, v, dx, dv = self.variation.unpack(t)
        gamma = christoffel_fast(self.arc.chart, x)
        return dv[:, 0] + np.einsum("kij,i,j->k", gamma, v, dx[:, 0])

    def norm2(self, t: float) -> float:
        x = self.arc.position(t)
        j = self.at(t)
        return self.arc.chart.inner(x, j, j)


def jacobi_transport(arc: GeodesicArc, j0, j0_prime) -> JacobiField:
    """
    Solve J'' + R(gamma', J) gamma' = 0 along the arc with J(0) = j0, J'(0) = j0_prime.

    The field is obtained from the linearized geodesic flow: a variation (dx, dv) of the
    initial state yields the Jacobi field dx, whose covariant derivative is
    dv + Gamma(v, dx).
    """
    chart = arc.chart
    j0 = np.asarray(j0, dtype=float)
    j0_prime = np.asarray(j0_prime, dtype=float)
    gamma0 = christoffel_fast(chart, arc.p0)
    dv0 = j0_prime - np.einsum("kij,i,j->k", gamma0, arc.v0, j0)
    variation = integrate_variational(
        chart, arc.p0, arc.v0, arc.t_max, j0[:, None], dv0[:, None]
    )
    return JacobiField(arc, variation)


def parallel_frame(arc: GeodesicArc, times) -> np.ndarray:
    """
    Parallel transport of the coordinate frame at arc.p0.

    Returns:
        Array of shape (len(times), n, n) whose [s, :, a] column is the transport of
        the a-th coordinate vector to gamma(times[s]).
    """
    chart = arc.chart
    n = chart.dim
    times = np.asarray(times, dtype=float)

    def rhs(t: float, y: np.ndarray) -> np.ndarray:
        x, v = y[:n], y[n : 2 * n]
        frame = y[2 * n :].reshape(n, n)
        gamma = christoffel_fast(chart, x)
        acc = -np.einsum("kij,i,j->k", gamma, v, v)
        d_frame = -np.einsum("kij,i,ja->ka", gamma, v, frame)
        return np.concatenate([v, acc, d_frame.ravel()])

    if arc.t_max == 0.0:
        return np.repeat(np.eye(n)[None], times.size, axis=0)
    settings = get_settings()
    y0 = np.concatenate([arc.p0, arc.v0, np.eye(n).ravel()])
    sol = solve_geodesic_system(
        chart, rhs, y0, arc.t_max, settings.geodesic_tol, settings.geodesic_method
    )
    GEODESIC_INTEGRATIONS.labels(kind="variational").inc()
    return np.stack([sol.sol(t)[2 * n :].reshape(n, n) for t in times])
