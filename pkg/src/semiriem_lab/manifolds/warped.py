"""Warped products -I x_f F and other diagonal charts with separable components."""

import math
from dataclasses import dataclass

import numpy as np

from semiriem_lab.manifolds.chart import MetricChart
from semiriem_lab.manifolds.profiles import (
    Profile,
    const_profile,
    cos_profile,
    cosh_profile,
    sin_profile,
    sn_profile,
)

INF = float("inf")


@dataclass(frozen=True)
class DiagonalComponent:
    """g_ii = sign * prod(profile(x[axis])) with distinct axes."""

    sign: float
    factors: tuple[tuple[int, Profile], ...] = ()


class SeparableDiagonalMetric:
    """Diagonal metric whose components are products of one-variable profiles."""

    def __init__(self, components: list[DiagonalComponent]):
        self.components = components
        self.dim = len(components)

    def metric(self, x: np.ndarray) -> np.ndarray:
        g = np.zeros((self.dim, self.dim))
        for i, comp in enumerate(self.components):
            value = comp.sign
            for axis, prof in comp.factors:
                value *= prof.f(x[axis])
            g[i, i] = value
        return g

    def jet(self, x: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        n = self.dim
        g = np.zeros((n, n))
        dg = np.zeros((n, n, n))
        ddg = np.zeros((n, n, n, n))
        for i, comp in enumerate(self.components):
            jets = [(axis, prof.jet(x[axis])) for axis, prof in comp.factors]
            values = [j[0] for _, j in jets]
            g[i, i] = comp.sign * math.prod(values)
            for a, (axis_a, (_, d1a, d2a)) in enumerate(jets):
                others = math.prod(v for c, v in enumerate(values) if c != a)
                dg[axis_a, i, i] = comp.sign * d1a * others
                ddg[axis_a, axis_a, i, i] = comp.sign * d2a * others
                for b, (axis_b, (_, d1b, _)) in enumerate(jets):
                    if b == a:
                        continue
                    rest = math.prod(v for c, v in enumerate(values) if c not in (a, b))
                    ddg[axis_a, axis_b, i, i] = comp.sign * d1a * d1b * rest
        return g, dg, ddg


def _polar_fiber_components(
    fiber_dim: int, fiber_curvature: float, warp2: Profile | None
) -> list[DiagonalComponent]:
    """Fiber block in geodesic polar coordinates (r, theta, phi), optionally warped."""
    base = ((0, warp2),) if warp2 is not None else ()
    offset = 1 if warp2 is not None else 0
    if fiber_dim == 1:
        return [DiagonalComponent(1.0, base)]
    sn2 = sn_profile(fiber_curvature).squared()
    r_axis = offset
    comps = [DiagonalComponent(1.0, base), DiagonalComponent(1.0, base + ((r_axis, sn2),))]
    if fiber_dim == 3:
        sin2 = sin_profile().squared()
        comps.append(DiagonalComponent(1.0, base + ((r_axis, sn2), (r_axis + 1, sin2))))
    return comps


def _polar_fiber_slack(x: np.ndarray, offset: int, fiber_dim: int, curvature: float) -> float:
    if fiber_dim == 1:
        return INF
    r = x[offset]
    slack = r
    if curvature > 0:
        slack = min(slack, math.pi / math.sqrt(curvature) - r)
    if fiber_dim == 3:
        theta = x[offset + 1]
        slack = min(slack, theta, math.pi - theta)
    return slack


def _polar_fiber_box(fiber_dim: int, curvature: float) -> list[tuple[float, float]]:
    if fiber_dim == 1:
        return [(-1.0, 1.0)]
    r_hi = math.pi / math.sqrt(curvature) - 0.3 if curvature > 0 else 2.0
    box = [(0.3, r_hi)]
    if fiber_dim == 3:
        box.append((0.3, math.pi - 0.3))
    box.append((-math.pi, math.pi))
    return box


@dataclass(frozen=True)
class WarpedProductSpec:
    """
    A GRW space -I x_f F with a constant-curvature fiber F.

    Attributes:
        interval: (a, b), either end may be infinite
        warping: Positive warping function f with f', f''
        fiber_dim: Dimension of F (1 suppresses the fiber curvature condition)
        fiber_curvature: Constant curvature C_F of F
    """

    interval: tuple[float, float]
    warping: Profile
    fiber_dim: int
    fiber_curvature: float = 0.0
    name: str = "grw"

    def __post_init__(self):
        a, b = self.interval
        if not a < b:
            raise ValueError("interval must satisfy a < b")
        if not 1 <= self.fiber_dim <= 3:
            raise ValueError("fiber_dim must be 1, 2 or 3")

    @property
    def dim(self) -> int:
        return self.fiber_dim + 1

    def compact_window(self, window: float = 3.0, margin: float = 1e-3) -> tuple[float, float]:
        """Compact subinterval [-window, window] clipped to the interval with a margin."""
        a, b = self.interval
        lo = max(-window, a + margin)
        hi = min(window, b - margin)
        return lo, hi

    def slack(self, x: np.ndarray) -> float:
        a, b = self.interval
        tau = x[0]
        slack = min(tau - a, b - tau)
        if not math.isfinite(slack):
            slack = INF
        return min(slack, _polar_fiber_slack(x, 1, self.fiber_dim, self.fiber_curvature))

    def to_chart(
        self, name: str | None = None, window: float = 3.0, margin: float = 1e-3
    ) -> MetricChart:
        """
        Build the chart -dtau^2 + f(tau)^2 ds_F^2 with F in geodesic polar coordinates.

        Coordinates are (tau, x) when fiber_dim = 1 and (tau, r, theta[, phi]) otherwise.
        """
        components = [DiagonalComponent(-1.0)] + _polar_fiber_components(
            self.fiber_dim, self.fiber_curvature, self.warping.squared()
        )
        metric = SeparableDiagonalMetric(components)
        positive = self.warping

        def slack(x: np.ndarray) -> float:
            s = self.slack(x)
            if s <= 0:
                return s
            return min(s, positive(x[0]))

        box = [self.compact_window(window, margin)] + _polar_fiber_box(
            self.fiber_dim, self.fiber_curvature
        )
        return MetricChart(
            name=name or self.name,
            dim=self.dim,
            index=1,
            metric=metric.metric,
            slack=slack,
            metric_jet=metric.jet,
            time_axis=0,
            sample_box=tuple(box),
            angular_axes=(self.dim - 1,) if self.fiber_dim > 1 else (),
            notes=f"-I x_f F, f={self.warping.name}, C_F={self.fiber_curvature:g}",
            extras={"warped": self},
        )


def minkowski_chart(dim: int) -> MetricChart:
    """Minkowski space with coordinates (x_1, ..., x_{n-1}, t) and metric diag(1, ..., 1, -1)."""
    metric = SeparableDiagonalMetric(
        [DiagonalComponent(1.0) for _ in range(dim - 1)] + [DiagonalComponent(-1.0)]
    )
    return MetricChart(
        name=f"minkowski:{dim}",
        dim=dim,
        index=1,
        metric=metric.metric,
        slack=lambda x: INF,
        metric_jet=metric.jet,
        time_axis=dim - 1,
        sample_box=tuple([(-2.0, 2.0)] * dim),
        notes="flat",
    )


def riemannian_model_chart(curvature: float) -> MetricChart:
    """Constant-curvature surface in geodesic polar coordinates dr^2 + sn_K(r)^2 dtheta^2."""
    metric = SeparableDiagonalMetric(
        [DiagonalComponent(1.0), DiagonalComponent(1.0, ((0, sn_profile(curvature).squared()),))]
    )
    r_max = math.pi / math.sqrt(curvature) if curvature > 0 else INF

    def slack(x: np.ndarray) -> float:
        return min(x[0], r_max - x[0])

    r_hi = min(2.0, r_max - 0.3)
    return MetricChart(
        name=f"model-surface:K={curvature:g},index=0",
        dim=2,
        index=0,
        metric=metric.metric,
        slack=slack,
        metric_jet=metric.jet,
        sample_box=((0.3, r_hi), (-math.pi, math.pi)),
        angular_axes=(1,),
        notes="Riemannian model surface",
    )


def lorentzian_model_spec(curvature: float) -> WarpedProductSpec:
    """-I x_f R with f'' = K f, a Lorentzian surface of constant curvature K."""
    if curvature > 0:
        s = math.sqrt(curvature)
        return WarpedProductSpec((-INF, INF), cosh_profile(1.0, s), 1, name="lorentzian-model")
    if curvature < 0:
        s = math.sqrt(-curvature)
        half = math.pi / (2.0 * s)
        return WarpedProductSpec((-half, half), cos_profile(1.0, s), 1, name="lorentzian-model")
    return WarpedProductSpec((-INF, INF), const_profile(1.0), 1, name="lorentzian-model")
