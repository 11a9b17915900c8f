"""Geodesic integration with adaptive Runge-Kutta and dense output."""

from dataclasses import dataclass

import numpy as np
import structlog
from scipy.integrate import OdeSolution, solve_ivp

from semiriem_lab.config import get_settings
from semiriem_lab.errors import LeftDomain, OutOfDomain, OutsideRegion, StepSizeUnderflow
from semiriem_lab.geodesics.region import StarRegion
from semiriem_lab.manifolds.chart import MetricChart, christoffel_fast
from semiriem_lab.observability import GEODESIC_INTEGRATIONS

logger = structlog.get_logger()

SLACK_CLIP = 1e6


@dataclass(frozen=True, eq=False)
class GeodesicArc:
    """
    A numerically integrated geodesic t -> gamma(t), t in [0, t_max].

    Attributes:
        chart: Chart the arc lives in
        p0: gamma(0)
        v0: gamma'(0)
        t_max: Parameter length
        solution: Dense interpolant of (gamma, gamma'); None for constant arcs
        n_steps: Accepted integrator steps
        max_drift: Largest |g(gamma',gamma') - g(v0,v0)| at the step points
    """

    chart: MetricChart
    p0: np.ndarray
    v0: np.ndarray
    t_max: float
    solution: OdeSolution | None
    n_steps: int = 0
    max_drift: float = 0.0

    @property
    def dim(self) -> int:
        return self.chart.dim

    @property
    def speed2(self) -> float:
        """g(v0, v0), conserved along the arc."""
        return self.chart.inner(self.p0, self.v0, self.v0)

    def state(self, t: float) -> tuple[np.ndarray, np.ndarray]:
        if self.solution is None:
            return self.p0 + t * self.v0, self.v0.copy()
        y = self.solution(t)
        n = self.dim
        return y[:n].copy(), y[n : 2 * n].copy()

    def position(self, t: float) -> np.ndarray:
        return self.state(t)[0]

    def velocity(self, t: float) -> np.ndarray:
        return self.state(t)[1]

    @property
    def end_point(self) -> np.ndarray:
        return self.position(self.t_max)


def geodesic_rhs(chart: MetricChart):
    """Right-hand side of x' = v, v' = -Gamma(v, v)."""
    n = chart.dim

    def rhs(t: float, y: np.ndarray) -> np.ndarray:
        x, v = y[:n], y[n:]
        gamma = christoffel_fast(chart, x)
        return np.concatenate([v, -np.einsum("kij,i,j->k", gamma, v, v)])

    return rhs


def domain_event(chart: MetricChart, margin: float = 0.0):
    """Terminal event firing when the trajectory reaches the domain margin."""
    n = chart.dim

    def event(t: float, y: np.ndarray) -> float:
        return min(chart.slack(y[:n]), SLACK_CLIP) - margin

    event.terminal = True
    event.direction = -1
    return event


def solve_geodesic_system(chart: MetricChart, rhs, y0: np.ndarray, t_max: float, tol: float,
                          method: str, margin: float = 0.0):
    """Run solve_ivp with the domain event; translate failures into lab errors."""
    sol = solve_ivp(
        rhs,
        (0.0, t_max),
        y0,
        method=method,
        rtol=tol,
        atol=tol * 1e-2,
        dense_output=True,
        events=[domain_event(chart, margin)],
    )
    if sol.status == 1:
        t_exit = float(sol.t_events[0][0])
        logger.debug("geodesic_left_domain", chart=chart.name, t_exit=t_exit)
        raise LeftDomain(t_exit)
    if sol.status == -1:
        raise StepSizeUnderflow(sol.message)
    return sol


def integrate_geodesic(
    chart: MetricChart,
    p0,
    v0,
    t_max: float,
    tol: float | None = None,
    method: str | None = None,
    margin: float = 0.0,
) -> GeodesicArc:
    """
    Integrate the geodesic equation from (p0, v0) over [0, t_max].

    Args:
        chart: Chart to integrate in
        p0: Initial point (must satisfy the domain predicate)
        v0: Initial velocity
        t_max: Final parameter (>= 0)
        tol: Relative local error tolerance (defaults to settings.geodesic_tol)
        method: solve_ivp method name (defaults to settings.geodesic_method, RK45)
        margin: Interior margin the trajectory must keep from the boundary

    Returns:
        GeodesicArc with dense output

    Raises:
        OutOfDomain: If p0 is outside the domain
        LeftDomain: If the trajectory exits the domain before t_max
        StepSizeUnderflow: If the integrator fails
    """
    settings = get_settings()
    tol = settings.geodesic_tol if tol is None else tol
    method = settings.geodesic_method if method is None else method
    p0 = np.asarray(p0, dtype=float)
    v0 = np.asarray(v0, dtype=float)
    if not chart.contains(p0, margin):
        raise OutOfDomain(f"{chart.name}: start point {p0.tolist()} outside domain")
    if t_max < 0:
        raise ValueError("t_max must be non-negative")
    if t_max == 0.0 or not np.any(v0):
        return GeodesicArc(chart, p0, v0, float(t_max), None)

    sol = solve_geodesic_system(
        chart, geodesic_rhs(chart), np.concatenate([p0, v0]), t_max, tol, method, margin
    )
    GEODESIC_INTEGRATIONS.labels(kind="plain").inc()

    n = chart.dim
    e0 = chart.inner(p0, v0, v0)
    drift = max(
        abs(chart.inner(sol.y[:n, k], sol.y[n:, k], sol.y[n:, k]) - e0)
        for k in range(sol.y.shape[1])
    )
    return GeodesicArc(
        chart=chart,
        p0=p0,
        v0=v0,
        t_max=float(t_max),
        solution=sol.sol,
        n_steps=len(sol.t) - 1,
        max_drift=float(drift),
    )


def exp_map(chart: MetricChart, q, v, region: StarRegion | None = None) -> np.ndarray:
    """
    Exponential map exp_q(v) = gamma_{q,v}(1).

    Raises:
        OutsideRegion: If v is outside the given star region
    """
    q = np.asarray(q, dtype=float)
    v = np.asarray(v, dtype=float)
    if region is not None and not region.contains(v):
        raise OutsideRegion(f"|v|={np.linalg.norm(v):.4g} exceeds star radius {region.radius:g}")
    if not np.any(v):
        return q.copy()
    return integrate_geodesic(chart, q, v, 1.0).end_point
