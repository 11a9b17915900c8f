"""Comparison functions f_{K,q} and the scalar fields the Hessian machinery acts on."""

import math
from collections.abc import Callable
from dataclasses import dataclass, field
from typing import Literal, Protocol

import numpy as np

from semiriem_lab.errors import OutsideRegion
from semiriem_lab.geodesics import ShootingResult, StarRegion, shoot
from semiriem_lab.manifolds.chart import MetricChart
from semiriem_lab.manifolds.profiles import Profile
from semiriem_lab.manifolds.warped import WarpedProductSpec

SERIES_SWITCH = 1e-2
SERIES_TERMS = 40

BoundMode = Literal["full", "quarter"]


def _series_coefficient(K: float, n: int) -> float:
    return (-1) ** (n + 1) * K ** (n - 1) / math.factorial(2 * n)


def f_series(K: float, E: float, terms: int = 20) -> float:
    """Truncated power series sum_{n>=1} (-1)^{n+1} K^{n-1} E^n / (2n)!."""
    return sum(_series_coefficient(K, n) * E**n for n in range(1, terms + 1))


def f_closed(K: float, E: float) -> float:
    """(1 - cos sqrt(KE)) / K, with cos(it) = cosh t; E/2 when KE = 0."""
    x = K * E
    if x == 0.0:
        return E / 2.0
    if x > 0:
        return (1.0 - math.cos(math.sqrt(x))) / K
    return (1.0 - math.cosh(math.sqrt(-x))) / K


def f_value(K: float, E: float) -> float:
    """The comparison function of signed energy E for curvature K."""
    if abs(K * E) < SERIES_SWITCH:
        return f_series(K, E, 12)
    return f_closed(K, E)


def f_prime(K: float, E: float) -> float:
    """df/dE = sin sqrt(KE) / (2 sqrt(KE)), sinh on the imaginary branch."""
    x = K * E
    if abs(x) < SERIES_SWITCH:
        return f_derivative(K, E, 1)
    if x > 0:
        s = math.sqrt(x)
        return math.sin(s) / (2.0 * s)
    s = math.sqrt(-x)
    return math.sinh(s) / (2.0 * s)


def _f_second(K: float, E: float) -> float:
    x = K * E
    if x > 0:
        s = math.sqrt(x)
        return K * (s * math.cos(s) - math.sin(s)) / (4.0 * s**3)
    s = math.sqrt(-x)
    return -K * (s * math.cosh(s) - math.sinh(s)) / (4.0 * s**3)


def f_derivative(K: float, E: float, order: int) -> float:
    """
    d^order f / dE^order.

    Orders 0 and 1 use the closed forms away from KE = 0; order 2 has a closed form as
    well. Everything else sums the differentiated power series.
    """
    if order < 0:
        raise ValueError("order must be non-negative")
    x = K * E
    if abs(x) >= SERIES_SWITCH:
        if order == 0:
            return f_closed(K, E)
        if order == 1:
            return f_prime(K, E)
        if order == 2:
            return _f_second(K, E)
    total = 0.0
    for n in range(max(order, 1), SERIES_TERMS + 1):
        total += _series_coefficient(K, n) * math.perm(n, order) * E ** (n - order)
    return total


def lambda_value(K: float, E: float) -> float:
    """lambda = 1 - K f = cos sqrt(KE), cosh on the imaginary branch, 1 when K = 0."""
    x = K * E
    if x == 0.0:
        return 1.0
    if x > 0:
        return math.cos(math.sqrt(x))
    return math.cosh(math.sqrt(-x))


def energy_bound(K: float, mode: BoundMode = "full") -> float:
    """pi^2/K (mode full) or pi^2/(4K) (mode quarter); infinite for K = 0."""
    if K == 0:
        return math.inf
    scale = 1.0 if mode == "full" else 0.25
    return scale * math.pi**2 / K


def energy_bound_slack(K: float, E: float, mode: BoundMode = "full") -> float:
    """Positive when E satisfies the bound: E < pi^2/K for K > 0, E > pi^2/K for K < 0."""
    if K == 0:
        return math.inf
    bound = energy_bound(K, mode)
    return bound - E if K > 0 else E - bound


@dataclass(frozen=True)
class FieldJet:
    """Value and first-order data of a scalar field at a point."""

    point: np.ndarray
    value: float
    differential: np.ndarray
    gradient: np.ndarray
    energy: float | None = None
    shooting: ShootingResult | None = None


class ScalarField(Protocol):
    chart: MetricChart
    name: str

    def jet(self, p, guess=None, near: ShootingResult | None = None) -> FieldJet: ...

    def value(self, p) -> float: ...

    def differential(self, p) -> np.ndarray: ...

    def lam(self, p, energy: float | None = None) -> float: ...

    @property
    def scale(self) -> float: ...


@dataclass(frozen=True, eq=False)
class ComparisonField:
    """
    The pair (q, K) with evaluators for E_q, f_{K,q} and lambda = 1 - K f_{K,q}.

    Every evaluation solves the boundary-value problem exp_q(v) = p, optionally
    warm-started from a guess or a nearby solution, and raises OutsideRegion when
    the solution v leaves the star region.
    """

    chart: MetricChart
    q: np.ndarray
    K: float
    region: StarRegion
    mode: BoundMode = "full"

    def __post_init__(self):
        object.__setattr__(self, "q", np.asarray(self.q, dtype=float))

    @property
    def name(self) -> str:
        return f"f_(K={self.K:g},q)"

    @property
    def scale(self) -> float:
        return self.region.radius

    def solve(self, p, guess=None, near: ShootingResult | None = None) -> ShootingResult:
        result = shoot(self.chart, self.q, p, guess=guess, near=near)
        if not self.region.contains(result.v):
            raise OutsideRegion(
                f"|v|={np.linalg.norm(result.v):.4g} outside star radius {self.region.radius:g}"
            )
        return result

    def energy(self, p, guess=None) -> float:
        p = np.asarray(p, dtype=float)
        if np.array_equal(p, self.q):
            return 0.0
        v = self.solve(p, guess=guess).v
        return self.chart.inner(self.q, v, v)

    def jet(self, p, guess=None, near: ShootingResult | None = None) -> FieldJet:
        p = np.asarray(p, dtype=float)
        if np.array_equal(p, self.q):
            zero = np.zeros_like(p)
            return FieldJet(p, 0.0, zero, zero, energy=0.0)
        result = self.solve(p, guess=guess, near=near)
        energy = self.chart.inner(self.q, result.v, result.v)
        grad_e = 2.0 * result.end_velocity
        fe = f_prime(self.K, energy)
        gradient = fe * grad_e
        return FieldJet(
            point=p,
            value=f_value(self.K, energy),
            differential=self.chart.metric(p) @ gradient,
            gradient=gradient,
            energy=energy,
            shooting=result,
        )

    def value(self, p) -> float:
        return f_value(self.K, self.energy(p))

    def differential(self, p) -> np.ndarray:
        return self.jet(p).differential

    def lam(self, p, energy: float | None = None) -> float:
        if energy is None:
            energy = self.energy(p)
        return lambda_value(self.K, energy)


@dataclass(frozen=True, eq=False)
class ExplicitField:
    """A scalar field given by closed-form value, differential and lambda."""

    chart: MetricChart
    name: str
    value_fn: Callable[[np.ndarray], float]
    differential_fn: Callable[[np.ndarray], np.ndarray]
    lam_fn: Callable[[np.ndarray], float]
    region_scale: float = 1.0
    info: dict = field(default_factory=dict)

    @property
    def scale(self) -> float:
        return self.region_scale

    def jet(self, p, guess=None, near: ShootingResult | None = None) -> FieldJet:
        p = np.asarray(p, dtype=float)
        df = np.asarray(self.differential_fn(p), dtype=float)
        return FieldJet(
            point=p,
            value=float(self.value_fn(p)),
            differential=df,
            gradient=np.linalg.solve(self.chart.metric(p), df),
        )

    def value(self, p) -> float:
        return float(self.value_fn(np.asarray(p, dtype=float)))

    def differential(self, p) -> np.ndarray:
        return np.asarray(self.differential_fn(np.asarray(p, dtype=float)), dtype=float)

    def lam(self, p, energy: float | None = None) -> float:
        return float(self.lam_fn(np.asarray(p, dtype=float)))


def minkowski_quadratic(chart: MetricChart, lambda0: float) -> ExplicitField:
    """1/2 (x.x - lambda0 t^2) on Minkowski space, lambda0-convex for lambda0 <= 1."""
    weights = np.ones(chart.dim)
    weights[chart.time_axis] = -lambda0
    return ExplicitField(
        chart=chart,
        name=f"minkowski-quadratic(lambda0={lambda0:g})",
        value_fn=lambda x: 0.5 * float(np.sum(weights * x * x)),
        differential_fn=lambda x: weights * x,
        lam_fn=lambda x: lambda0,
        info={"lambda0": lambda0},
    )


def positive_quadratic(chart: MetricChart) -> ExplicitField:
    """1/2 sum x_i^2 in coordinates: 1-convex on Minkowski space, never of Lorentzian signature."""
    return ExplicitField(
        chart=chart,
        name="positive-quadratic",
        value_fn=lambda x: 0.5 * float(x @ x),
        differential_fn=lambda x: np.array(x, dtype=float),
        lam_fn=lambda x: 1.0,
    )


def warped_lift(spec: WarpedProductSpec, chart: MetricChart | None = None) -> ExplicitField:
    """
    The lift of -f^2/2 from the interval of a GRW space.

    Its Hessian is (f'^2 + f f'')(-dtau^2) + f'^2 g_fiber, so lambda = f'^2 is the
    largest constant it can be lambda-convex for at each tau.
    """
    warping: Profile = spec.warping
    chart = chart or spec.to_chart()

    def differential(x: np.ndarray) -> np.ndarray:
        f, df, _ = warping.jet(x[0])
        out = np.zeros(chart.dim)
        out[0] = -f * df
        return out

    return ExplicitField(
        chart=chart,
        name=f"-{warping.name}^2/2",
        value_fn=lambda x: -0.5 * warping.f(x[0]) ** 2,
        differential_fn=differential,
        lam_fn=lambda x: warping.df(x[0]) ** 2,
    )


def lorentzian_window(spec: WarpedProductSpec, n: int = 2001) -> tuple[float, float] | None:
    """
    Largest grid sub-interval of the warped product's compact window on which f'^2 + f f'' > 0,
    i.e. where the Hessian of -f^2/2 keeps Lorentzian signature.
    """
    lo, hi = spec.compact_window()
    taus = np.linspace(lo, hi, n)
    good = np.array([spec.warping.df(t) ** 2 + spec.warping.f(t) * spec.warping.ddf(t) > 0
                     for t in taus])
    best: tuple[int, int] | None = None
    start = None
    for i, ok in enumerate(np.append(good, False)):
        if ok and start is None:
            start = i
        elif not ok and start is not None:
            if best is None or i - start > best[1] - best[0]:
                best = (start, i - 1)
            start = None
    if best is None:
        return None
    return float(taus[best[0]]), float(taus[best[1]])
