"""Metric charts, tangent vectors, and Christoffel symbols."""

from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np

from semiriem_lab.errors import DegeneratePlane, OutOfDomain, StencilExitsDomain

ArrayFn = Callable[[np.ndarray], np.ndarray]
MetricJet = Callable[[np.ndarray], tuple[np.ndarray, np.ndarray, np.ndarray]]

SYMMETRY_TOL = 1e-12
FD_STEP = float(np.finfo(float).eps) ** 0.2


@dataclass(frozen=True, eq=False)
class MetricChart:
    """
    A single analytic coordinate chart of a semi-Riemannian manifold.

    Charts are immutable and safe to share between evaluation tasks.

    Attributes:
        name: Catalog identifier
        dim: Manifold dimension
        index: Number of negative eigenvalues of the metric (1 for Lorentzian)
        metric: Coordinates -> symmetric (dim, dim) component array
        slack: Coordinates -> signed distance to the domain boundary (positive inside)
        metric_jet: Optional analytic (g, dg, ddg) with dg[m,i,j] = d_m g_ij and
            ddg[m,l,i,j] = d_m d_l g_ij
        time_axis: Coordinate whose basis vector is future-pointing, if Lorentzian
        sample_box: Coordinate box used by region samplers
        scale: Coordinate scale for finite-difference stencils
        angular_axes: Coordinates that are 2pi-periodic angles
    """

    name: str
    dim: int
    index: int
    metric: ArrayFn
    slack: Callable[[np.ndarray], float]
    metric_jet: MetricJet | None = None
    time_axis: int | None = None
    sample_box: tuple[tuple[float, float], ...] = ()
    scale: float = 1.0
    angular_axes: tuple[int, ...] = ()
    notes: str = ""
    extras: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.dim < 2:
            raise ValueError("dim must be >= 2")
        if not 0 <= self.index <= self.dim:
            raise ValueError("index must lie in [0, dim]")

    @property
    def is_lorentzian(self) -> bool:
        return self.index == 1

    @property
    def has_analytic_derivatives(self) -> bool:
        return self.metric_jet is not None

    @property
    def stencil_width(self) -> float:
        """Distance a finite-difference stencil reaches from its center."""
        return 0.0 if self.has_analytic_derivatives else 2.0 * FD_STEP * self.scale

    def contains(self, x, margin: float = 0.0) -> bool:
        return bool(self.slack(np.asarray(x, dtype=float)) > margin)

    def displacement(self, x, y) -> np.ndarray:
        """y - x with angular coordinates reduced to [-pi, pi)."""
        d = np.asarray(y, dtype=float) - np.asarray(x, dtype=float)
        for axis in self.angular_axes:
            d[axis] = (d[axis] + np.pi) % (2.0 * np.pi) - np.pi
        return d

    def inner(self, x, v, w) -> float:
        return float(np.asarray(v) @ self.metric(np.asarray(x, dtype=float)) @ np.asarray(w))

    def future_vector(self) -> np.ndarray:
        """Coordinate vector declared future-pointing."""
        if self.time_axis is None:
            raise ValueError(f"chart {self.name} has no time orientation")
        e = np.zeros(self.dim)
        e[self.time_axis] = 1.0
        return e


@dataclass(frozen=True, eq=False)
class TangentVector:
    """A tangent vector given by its components at a chart point."""

    chart: MetricChart
    point: np.ndarray
    components: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "point", np.asarray(self.point, dtype=float))
        object.__setattr__(self, "components", np.asarray(self.components, dtype=float))
        if not self.chart.contains(self.point):
            raise OutOfDomain(f"{self.chart.name}: point {self.point.tolist()} outside domain")

    def norm2(self) -> float:
        """g(v, v)."""
        return self.chart.inner(self.point, self.components, self.components)


@dataclass(frozen=True, eq=False)
class PlaneSection:
    """A 2-plane spanned by two tangent vectors at a common point."""

    v: TangentVector
    w: TangentVector

    def __post_init__(self):
        if not np.allclose(self.v.point, self.w.point, rtol=0.0, atol=1e-14):
            raise ValueError("plane vectors must share a base point")

    @property
    def point(self) -> np.ndarray:
        return self.v.point

    @property
    def chart(self) -> MetricChart:
        return self.v.chart

    def gram_q(self) -> float:
        """Q(v,w) = g(v,v)g(w,w) - g(v,w)^2."""
        g = self.chart.metric(self.point)
        return gram_q(g, self.v.components, self.w.components)

    def is_nondegenerate(self, tol: float) -> bool:
        return abs(self.gram_q()) > tol

    def require_nondegenerate(self, tol: float) -> float:
        q = self.gram_q()
        if abs(q) <= tol:
            raise DegeneratePlane(f"|Q|={abs(q):.3g} <= {tol:g}")
        return q


def gram_q(g: np.ndarray, v: np.ndarray, w: np.ndarray) -> float:
    gvv = v @ g @ v
    gww = w @ g @ w
    gvw = v @ g @ w
    return float(gvv * gww - gvw * gvw)


def metric_eval(chart: MetricChart, x) -> np.ndarray:
    """
    Evaluate the metric components at a domain point.

    Raises:
        OutOfDomain: If x fails the domain predicate or the signature is wrong there
    """
    x = np.asarray(x, dtype=float)
    if not chart.contains(x):
        raise OutOfDomain(f"{chart.name}: point {x.tolist()} outside domain")
    g = np.asarray(chart.metric(x), dtype=float)
    scale = max(1.0, float(np.max(np.abs(g))))
    if np.max(np.abs(g - g.T)) > SYMMETRY_TOL * scale:
        raise OutOfDomain(f"{chart.name}: metric not symmetric at {x.tolist()}")
    negatives = int(np.sum(np.linalg.eigvalsh(g) < 0))
    if negatives != chart.index:
        raise OutOfDomain(
            f"{chart.name}: signature has {negatives} negatives at {x.tolist()}, "
            f"expected {chart.index}"
        )
    return g


def _richardson_partials(func: ArrayFn, x: np.ndarray, h: float) -> np.ndarray:
    """Stack of d_m func(x) by 4th-order central differences plus one Richardson step."""

    def central(step: float, m: int) -> np.ndarray:
        e = np.zeros_like(x)
        e[m] = step
        return (
            -func(x + 2 * e) + 8 * func(x + e) - 8 * func(x - e) + func(x - 2 * e)
        ) / (12.0 * step)

    partials = []
    for m in range(x.size):
        coarse = central(h, m)
        fine = central(h / 2.0, m)
        partials.append((16.0 * fine - coarse) / 15.0)
    return np.stack(partials)


def metric_jet(chart: MetricChart, x: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Metric with first and second partials, analytic when the chart provides them."""
    if chart.metric_jet is not None:
        return chart.metric_jet(x)
    h = FD_STEP * chart.scale
    g = np.asarray(chart.metric(x), dtype=float)

    def first(y: np.ndarray) -> np.ndarray:
        return _richardson_partials(chart.metric, y, h)

    dg = first(x)
    ddg = _richardson_partials(first, x, h)
    return g, dg, 0.5 * (ddg + np.swapaxes(ddg, 0, 1))


def christoffel_from_jet(g: np.ndarray, dg: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Return (Gamma[k,i,j], g^-1) from the metric and its first partials."""
    ginv = np.linalg.inv(g)
    lowered = np.transpose(dg, (1, 0, 2)) + np.transpose(dg, (1, 2, 0)) - dg
    return 0.5 * np.einsum("kl,lij->kij", ginv, lowered), ginv


def christoffel_with_derivatives(
    chart: MetricChart, x: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Return Gamma[k,i,j] and dGamma[m,k,i,j] = d_m Gamma^k_ij."""
    g, dg, ddg = metric_jet(chart, x)
    ginv = np.linalg.inv(g)
    lowered = np.transpose(dg, (1, 0, 2)) + np.transpose(dg, (1, 2, 0)) - dg
    d_lowered = (
        np.transpose(ddg, (0, 2, 1, 3)) + np.transpose(ddg, (0, 2, 3, 1)) - ddg
    )
    d_ginv = -np.einsum("ka,mab,bl->mkl", ginv, dg, ginv)
    gamma = 0.5 * np.einsum("kl,lij->kij", ginv, lowered)
    d_gamma = 0.5 * (
        np.einsum("mkl,lij->mkij", d_ginv, lowered) + np.einsum("kl,mlij->mkij", ginv, d_lowered)
    )
    return gamma, d_gamma


def christoffel_fast(chart: MetricChart, x: np.ndarray) -> np.ndarray:
    """Christoffel symbols without domain checks, for ODE right-hand sides."""
    if chart.metric_jet is not None:
        g, dg, _ = chart.metric_jet(x)
    else:
        g = np.asarray(chart.metric(x), dtype=float)
        dg = _richardson_partials(chart.metric, x, FD_STEP * chart.scale)
    gamma, _ = christoffel_from_jet(g, dg)
    return gamma


def christoffel(chart: MetricChart, x) -> np.ndarray:
    """
    Christoffel symbols Gamma^k_ij at x, symmetric in the lower indices.

    Exact for charts with analytic derivatives; 4th-order central differences with
    Richardson extrapolation otherwise.

    Raises:
        OutOfDomain: If x is outside the domain
        StencilExitsDomain: If a finite-difference stencil would cross the boundary
    """
    x = np.asarray(x, dtype=float)
    if not chart.contains(x):
        raise OutOfDomain(f"{chart.name}: point {x.tolist()} outside domain")
    if not chart.contains(x, margin=chart.stencil_width):
        raise StencilExitsDomain(f"{chart.name}: stencil at {x.tolist()} crosses the boundary")
    gamma = christoffel_fast(chart, x)
    return 0.5 * (gamma + np.swapaxes(gamma, 1, 2))


def christoffel_derivatives(chart: MetricChart, x) -> np.ndarray:
    """
    Partials dGamma[m,k,i,j] = d_m Gamma^k_ij.

    Raises:
        OutOfDomain: If x is outside the domain
        StencilExitsDomain: If a finite-difference stencil would cross the boundary
    """
    x = np.asarray(x, dtype=float)
    if not chart.contains(x):
        raise OutOfDomain(f"{chart.name}: point {x.tolist()} outside domain")
    if not chart.contains(x, margin=chart.stencil_width):
        raise StencilExitsDomain(f"{chart.name}: stencil at {x.tolist()} crosses the boundary")
    return christoffel_with_derivatives(chart, x)[1]


def finite_difference_christoffel(chart: MetricChart, x) -> np.ndarray:
    """Christoffel symbols from stencils on the metric alone, ignoring analytic partials."""
    x = np.asarray(x, dtype=float)
    g = np.asarray(chart.metric(x), dtype=float)
    dg = _richardson_partials(chart.metric, x, FD_STEP * chart.scale)
    gamma, _ = christoffel_from_jet(g, dg)
    return gamma
