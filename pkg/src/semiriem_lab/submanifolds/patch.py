"""Immersed parameter patches and the built-in patch families."""

import itertools
import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import Polynomial

from semiriem_lab.errors import OutOfDomain
from semiriem_lab.geodesics import integrate_geodesic
from semiriem_lab.manifolds.chart import MetricChart, christoffel

ParamFn = Callable[[np.ndarray], np.ndarray]

# fraction of a non-periodic parameter range kept free of grid points at each end
GRID_INSET = 0.05
PARAM_STEP = 1e-4


@dataclass(frozen=True, eq=False)
class ImmersedPatch:
    """
    An immersion phi of a parameter box into a chart.

    Attributes:
        chart: Ambient chart
        k: Intrinsic dimension
        param_domain: Box in R^k, one (lo, hi) per parameter
        phi: Parameters -> chart coordinates
        dphi: Parameters -> (dim, k) partials, finite differences when omitted
        ddphi: Parameters -> (dim, k, k) second partials, finite differences when omitted
        periodic: Per parameter, whether phi is periodic over its range
    """

    chart: MetricChart
    k: int
    param_domain: tuple[tuple[float, float], ...]
    phi: ParamFn
    dphi: ParamFn | None = None
    ddphi: ParamFn | None = None
    periodic: tuple[bool, ...] = ()
    name: str = "patch"
    info: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if len(self.param_domain) != self.k:
            raise ValueError("param_domain needs one range per parameter")
        if not self.periodic:
            object.__setattr__(self, "periodic", (False,) * self.k)

    @property
    def codimension(self) -> int:
        return self.chart.dim - self.k

    @property
    def is_compact(self) -> bool:
        return all(self.periodic)

    def point(self, u) -> np.ndarray:
        x = np.asarray(self.phi(np.asarray(u, dtype=float)), dtype=float)
        if not self.chart.contains(x):
            raise OutOfDomain(
                f"{self.name}: phi({np.asarray(u).tolist()}) outside {self.chart.name}"
            )
        return x

    def tangent(self, u) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        if self.dphi is not None:
            return np.asarray(self.dphi(u), dtype=float).reshape(self.chart.dim, self.k)
        cols = []
        for a in range(self.k):
            e = np.zeros(self.k)
            e[a] = PARAM_STEP
            cols.append((self.phi(u + e) - self.phi(u - e)) / (2 * PARAM_STEP))
        return np.column_stack(cols)

    def second_partials(self, u) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        if self.ddphi is not None:
            return np.asarray(self.ddphi(u), dtype=float).reshape(self.chart.dim, self.k, self.k)
        h = 1e-3
        out = np.zeros((self.chart.dim, self.k, self.k))
        for a in range(self.k):
            e = np.zeros(self.k)
            e[a] = h
            out[:, a, :] = (self.tangent(u + e) - self.tangent(u - e)) / (2 * h)
        return 0.5 * (out + np.swapaxes(out, 1, 2))

    def grid(self, n: int) -> list[np.ndarray]:
        """n points per parameter: closed-open on periodic ranges, inset elsewhere."""
        axes = []
        for (lo, hi), periodic in zip(self.param_domain, self.periodic):
            if periodic:
                axes.append(np.linspace(lo, hi, n, endpoint=False))
            else:
                inset = GRID_INSET * (hi - lo)
                axes.append(np.linspace(lo + inset, hi - inset, n))
        return [np.array(u) for u in itertools.product(*axes)]


def _require_time_last(chart: MetricChart, family: str):
    if not chart.is_lorentzian or chart.time_axis != chart.dim - 1:
        raise ValueError(f"{family} needs a Minkowski-type chart with time as the last axis")


def slice_patch(chart: MetricChart, t0: float,
                box: Sequence[tuple[float, float]] | None = None) -> ImmersedPatch:
    """The slice {x[time_axis] = t0}, parametrized by the remaining coordinates."""
    if chart.time_axis is None:
        raise ValueError(f"chart {chart.name} has no time axis")
    axis = chart.time_axis
    others = [i for i in range(chart.dim) if i != axis]
    box = tuple(box) if box is not None else tuple(chart.sample_box[i] for i in others)
    k = chart.dim - 1
    embed = np.zeros((chart.dim, k))
    for a, i in enumerate(others):
        embed[i, a] = 1.0

    def phi(u: np.ndarray) -> np.ndarray:
        return np.insert(u, axis, t0)

    return ImmersedPatch(
        chart=chart, k=k, param_domain=box, phi=phi,
        dphi=lambda u: embed, ddphi=lambda u: np.zeros((chart.dim, k, k)),
        name=f"slice(t0={t0:g})", info={"family": "slice", "t0": t0},
    )


def round_sphere(chart: MetricChart, radius: float, center=None) -> ImmersedPatch:
    """
    Round sphere S^{dim-2} of the given radius in a time slice of Minkowski space.

    The circle (dim 3) uses the angle; the 2-sphere (dim 4) uses (polar, azimuth)
    with the polar angle kept away from the poles.
    """
    _require_time_last(chart, "round-sphere")
    if radius <= 0:
        raise ValueError("radius must be positive")
    center = np.zeros(chart.dim) if center is None else np.asarray(center, dtype=float)
    n = chart.dim
    if n == 3:
        def phi(u):
            return center + radius * np.array([math.cos(u[0]), math.sin(u[0]), 0.0])

        def dphi(u):
            return radius * np.array([[-math.sin(u[0])], [math.cos(u[0])], [0.0]])

        def ddphi(u):
            return radius * np.array([-math.cos(u[0]), -math.sin(u[0]), 0.0]).reshape(3, 1, 1)

        return ImmersedPatch(
            chart=chart, k=1, param_domain=((0.0, 2 * math.pi),), phi=phi, dphi=dphi,
            ddphi=ddphi, periodic=(True,), name=f"round-sphere(r={radius:g})",
            info={"family": "round-sphere", "radius": radius, "center": center.tolist()},
        )
    if n == 4:
        def phi(u):
            th, ph = u
            return center + radius * np.array(
                [math.sin(th) * math.cos(ph), math.sin(th) * math.sin(ph), math.cos(th), 0.0]
            )

        def dphi(u):
            th, ph = u
            return radius * np.array([
                [math.cos(th) * math.cos(ph), -math.sin(th) * math.sin(ph)],
                [math.cos(th) * math.sin(ph), math.sin(th) * math.cos(ph)],
                [-math.sin(th), 0.0],
                [0.0, 0.0],
            ])

        def ddphi(u):
            th, ph = u
            out = np.zeros((4, 2, 2))
            st, ct, sp, cp = math.sin(th), math.cos(th), math.sin(ph), math.cos(ph)
            out[:3, 0, 0] = [-st * cp, -st * sp, -ct]
            out[:3, 0, 1] = out[:3, 1, 0] = [-ct * sp, ct * cp, 0.0]
            out[:3, 1, 1] = [-math.sin(th) * math.cos(ph), -math.sin(th) * math.sin(ph), 0.0]
            return radius * out

        return ImmersedPatch(
            chart=chart, k=2, param_domain=((0.3, math.pi - 0.3), (-math.pi, math.pi)),
            phi=phi, dphi=dphi, ddphi=ddphi, periodic=(False, True),
            name=f"round-sphere(r={radius:g})",
            info={"family": "round-sphere", "radius": radius, "center": center.tolist()},
        )
    raise ValueError("round-sphere supports Minkowski dimensions 3 and 4")


def _graph(chart: MetricChart, height: Callable[[np.ndarray], tuple[float, np.ndarray, np.ndarray]],
           box: Sequence[tuple[float, float]], name: str, info: dict) -> ImmersedPatch:
    """The graph t = height(x) over the spatial coordinates."""
    _require_time_last(chart, "graph")
    k = chart.dim - 1

    def phi(u):
        return np.append(u, height(u)[0])

    def dphi(u):
        return np.vstack([np.eye(k), height(u)[1]])

    def ddphi(u):
        out = np.zeros((chart.dim, k, k))
        out[-1] = height(u)[2]
        return out

    return ImmersedPatch(
        chart=chart, k=k, param_domain=tuple(box), phi=phi, dphi=dphi, ddphi=ddphi,
        name=name, info=info,
    )


def hyperboloid(chart: MetricChart, sign: int = 1, offset: float = 0.0,
                box: Sequence[tuple[float, float]] | None = None) -> ImmersedPatch:
    """
    The unit hyperboloid sheet t = sign * sqrt(1 + |x|^2) + offset.

    sign = +1 is the future sheet, -1 the past sheet.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    box = tuple(box) if box is not None else ((-1.0, 1.0),) * (chart.dim - 1)

    def height(x):
        rho = math.sqrt(1.0 + float(x @ x))
        hess = (np.eye(x.size) / rho - np.outer(x, x) / rho**3) * sign
        return sign * rho + offset, sign * x / rho, hess

    return _graph(
        chart, height, box, f"hyperboloid(sign={sign:+d},offset={offset:g})",
        {"family": "hyperboloid", "sign": sign, "offset": offset},
    )


def graph_patch(chart: MetricChart, coefficients: Sequence[float],
                box: Sequence[tuple[float, float]] | None = None) -> ImmersedPatch:
    """The graph t = sum_i h(x_i) for the polynomial h with coefficients given lowest first."""
    h = Polynomial(coefficients)
    dh = h.deriv()
    ddh = dh.deriv()
    box = tuple(box) if box is not None else ((-0.5, 0.5),) * (chart.dim - 1)

    def height(x):
        return float(np.sum(h(x))), dh(x), np.diag(ddh(x))

    return _graph(
        chart, height, box, f"graph({list(coefficients)})",
        {"family": "graph", "coefficients": list(coefficients)},
    )


def _geodesic_patch(chart: MetricChart, p, v, length: float, periodic: bool,
                    name: str, info: dict) -> ImmersedPatch:
    arc = integrate_geodesic(chart, p, v, length)

    def wrap(u):
        t = float(u[0])
        return t % length if periodic else t

    def ddphi(u):
        x, xdot = arc.state(wrap(u))
        return -np.einsum("kij,i,j->k", christoffel(chart, x), xdot, xdot).reshape(-1, 1, 1)

    return ImmersedPatch(
        chart=chart, k=1, param_domain=((0.0, length),),
        phi=lambda u: arc.position(wrap(u)),
        dphi=lambda u: arc.velocity(wrap(u)).reshape(-1, 1),
        ddphi=ddphi, periodic=(periodic,), name=name, info=info,
    )


def geodesic_segment(chart: MetricChart, p, v, length: float) -> ImmersedPatch:
    """The geodesic u -> gamma_{p,v}(u), u in [0, length]."""
    return _geodesic_patch(
        chart, p, v, length, False, f"geodesic-segment(length={length:g})",
        {"family": "geodesic-segment", "p": list(map(float, p)), "v": list(map(float, v))},
    )


def closed_geodesic(
    chart: MetricChart, p, v, period: float, closure_tol: float = 1e-6
) -> ImmersedPatch:
    """
    A periodic geodesic with gamma(period) = p and gamma'(period) = v.

    Angular coordinates are compared modulo 2pi.

    Raises:
        ValueError: If the geodesic does not close up within closure_tol
    """
    p = np.asarray(p, dtype=float)
    v = np.asarray(v, dtype=float)
    end, end_velocity = integrate_geodesic(chart, p, v, period).state(period)
    closure = float(max(
        np.max(np.abs(chart.displacement(p, end))), np.max(np.abs(end_velocity - v))
    ))
    if closure > closure_tol:
        raise ValueError(f"geodesic does not close after {period:g} (error {closure:.3g})")
    return _geodesic_patch(
        chart, p, v, period, True, f"closed-geodesic(period={period:g})",
        {"family": "closed-geodesic", "p": p.tolist(), "v": v.tolist(), "closure": closure},
    )
