"""Suite of numerical identities the library must reproduce on the built-in catalog."""

import math
from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np
import structlog

from semiriem_lab.convexity import (
    ComparisonField,
    box_sampler,
    certify_lambda_convex,
    f_closed,
    f_series,
    lambda_value,
    second_derivative,
    star_sampler,
)
from semiriem_lab.convexity.certify import STENCIL_MARGIN
from semiriem_lab.curvature_bounds import cross_validate_grw, sample_planes
from semiriem_lab.errors import LabError, NumericError
from semiriem_lab.geodesics import StarRegion, exp_map, integrate_geodesic, inverse_exp
from semiriem_lab.manifolds import (
    BUILTIN_IDS,
    CatalogEntry,
    PlaneSection,
    TangentVector,
    christoffel,
    finite_difference_christoffel,
    get_catalog,
    sectional_curvature,
)
from semiriem_lab.models import CheckReport, Series
from semiriem_lab.submanifolds import (
    ImmersedPatch,
    hyperboloid,
    restricted_laplacian,
    round_sphere,
    slice_patch,
)
from semiriem_lab.submanifolds.audit import finite_difference_gradient
from semiriem_lab.triangles import compare_triangles, sample_triangles

logger = structlog.get_logger()

CALIBRATION_Q_MIN = 1e-3
SERIES_K = (-1.0, -0.5, 0.5, 1.0)
HESSIAN_CASES = (("minkowski:3", 0.0), ("desitter:3", 1.0), ("antidesitter-sin:3", -1.0))
GRW_CHARTS = (
    "desitter:3",
    "antidesitter-sin:3",
    "grw-cosh-hyperbolic:3",
    "grw:static-hyperbolic",
    "grw:minkowski-polar",
)
GRADIENT_CHARTS = ("minkowski:3", "desitter:3", "antidesitter-sin:3", "grw-cosh-hyperbolic:3")
SHOOTING_CHARTS = ("desitter:3", "grw-cosh-hyperbolic:3")


@dataclass(frozen=True)
class SuiteCounts:
    planes: int
    hessian: int
    gradient: int
    grid_n: int
    grw_planes: int
    grw_charts: int
    triangles: int
    pairs: int
    round_trips: int


REDUCED = SuiteCounts(
    planes=60, hessian=20, gradient=10, grid_n=3, grw_planes=400, grw_charts=2,
    triangles=3, pairs=2, round_trips=10,
)
FULL = SuiteCounts(
    planes=1000, hessian=100, gradient=200, grid_n=6, grw_planes=2000, grw_charts=len(GRW_CHARTS),
    triangles=50, pairs=5, round_trips=100,
)


@dataclass
class IdentityResult:
    name: str
    residual: float
    tolerance: float
    n: int
    passed: bool = field(init=False)
    strict: bool = False
    error: str | None = None

    def __post_init__(self):
        if self.strict:
            self.passed = self.residual < self.tolerance
        else:
            self.passed = self.residual <= self.tolerance

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "residual": self.residual,
            "tolerance": self.tolerance,
            "n": self.n,
            "passed": self.passed,
            "error": self.error,
        }


def _constant_curvature_entries() -> list[CatalogEntry]:
    catalog = get_catalog()
    entries = (catalog.get(cid) for cid in BUILTIN_IDS)
    return [e for e in entries if e.constant_curvature is not None]


def _lorentzian_entries() -> list[CatalogEntry]:
    catalog = get_catalog()
    return [
        e for e in (catalog.get(cid) for cid in BUILTIN_IDS)
        if e.chart.is_lorentzian and e.chart.time_axis is not None
    ]


def _field(entry: CatalogEntry, K: float) -> ComparisonField:
    region = StarRegion(entry.base_point, entry.star_radius)
    return ComparisonField(entry.chart, entry.base_point, K, region)


def _section(entry: CatalogEntry, point, v, w) -> PlaneSection:
    chart = entry.chart
    return PlaneSection(TangentVector(chart, point, v), TangentVector(chart, point, w))


def calibration(counts: SuiteCounts, seed: int) -> IdentityResult:
    """sec = K on every constant-curvature chart."""
    worst, n = 0.0, 0
    for entry in _constant_curvature_entries():
        planes, _ = sample_planes(entry.chart, counts.planes, seed, plane_tol=CALIBRATION_Q_MIN)
        for plane in planes:
            sec = sectional_curvature(_section(entry, plane.point, plane.v, plane.w))
            worst = max(worst, abs(sec - entry.constant_curvature))
            n += 1
    return IdentityResult("calibration", worst, 1e-6, n)


def basis_independence(counts: SuiteCounts, seed: int) -> IdentityResult:
    """Sectional curvature is unchanged under invertible recombination of the spanning pair."""
    rng = np.random.default_rng(seed)
    worst, n = 0.0, 0
    for chart_id in ("desitter:3", "grw-cosh-hyperbolic:3"):
        entry = get_catalog().get(chart_id)
        planes, _ = sample_planes(entry.chart, counts.planes, seed, plane_tol=CALIBRATION_Q_MIN)
        for plane in planes:
            mix = rng.uniform(-1.0, 1.0, (2, 2)) + 2.0 * np.eye(2)
            v2 = mix[0, 0] * plane.v + mix[0, 1] * plane.w
            w2 = mix[1, 0] * plane.v + mix[1, 1] * plane.w
            before = sectional_curvature(_section(entry, plane.point, plane.v, plane.w))
            after = sectional_curvature(_section(entry, plane.point, v2, w2))
            worst = max(worst, abs(after - before))
            n += 1
    return IdentityResult("basis-independence", worst, 1e-6, n)


def christoffel_agreement(counts: SuiteCounts, seed: int) -> IdentityResult:
    """Analytic Christoffel symbols against finite differences of the metric."""
    rng = np.random.default_rng(seed)
    worst, n = 0.0, 0
    for entry in get_catalog().entries():
        chart = entry.chart
        if not chart.has_analytic_derivatives:
            continue
        sampler = box_sampler(chart, margin=STENCIL_MARGIN)
        for _ in range(max(2, counts.planes // 20)):
            x = sampler(rng).point
            diff = christoffel(chart, x) - finite_difference_christoffel(chart, x)
            worst = max(worst, float(np.max(np.abs(diff))))
            n += 1
    return IdentityResult("christoffel-agreement", worst, 1e-7, n)


def series_consistency(counts: SuiteCounts, seed: int) -> IdentityResult:
    worst, n = 0.0, 0
    for K in SERIES_K:
        for E in np.linspace(-0.99 / abs(K), 0.99 / abs(K), 41):
            worst = max(worst, abs(f_closed(K, E) - f_series(K, E, 20)))
            n += 1
    return IdentityResult("series-consistency", worst, 1e-12, n)


def lambda_positivity(counts: SuiteCounts, seed: int) -> IdentityResult:
    """lambda > 0 whenever KE < pi^2/4; the residual is -min lambda."""
    lowest, n = math.inf, 0
    for K in (-2.0, -1.0, 0.0, 0.5, 1.0, 2.0):
        if K == 0:
            energies = np.linspace(-10.0, 10.0, 41)
        else:
            limit = 0.999 * math.pi**2 / 4 / K
            energies = np.linspace(min(limit, -limit), max(limit, -limit), 41)
        for E in energies:
            lowest = min(lowest, lambda_value(K, float(E)))
            n += 1
    return IdentityResult("lambda-positivity", -lowest, 0.0, n, strict=True)


def hessian_identity(counts: SuiteCounts, seed: int) -> IdentityResult:
    """Hess f_{K,q} = (1 - K f) g on the constant-curvature charts."""
    worst, n = 0.0, 0
    for chart_id, K in HESSIAN_CASES:
        entry = get_catalog().get(chart_id)
        field_ = _field(entry, K)
        report = certify_lambda_convex(field_, star_sampler(field_), counts.hessian, seed,
                                       check_id=f"hessian-identity:{chart_id}")
        if report.min_margin is None:
            raise NumericError(f"{chart_id}: every Hessian sample failed")
        worst = max(worst, abs(report.min_margin), abs(report.max_margin))
        n += report.n_samples
    return IdentityResult("hessian-identity", worst, 1e-5, n)


def vertex_behavior(counts: SuiteCounts, seed: int) -> IdentityResult:
    """(f o gamma)''(0) = -1 for unit timelike geodesics at q."""
    worst, n = 0.0, 0
    for entry in _lorentzian_entries():
        chart, q = entry.chart, entry.base_point
        e = chart.future_vector()
        v = e / math.sqrt(-chart.inner(q, e, e))
        for K in (-1.0, 0.0, 1.0):
            value, _ = second_derivative(_field(entry, K), q, v)
            worst = max(worst, abs(value + 1.0))
            n += 1
    return IdentityResult("vertex-behavior", worst, 1e-5, n)


def gradient_formula(counts: SuiteCounts, seed: int) -> IdentityResult:
    """grad f = f'(E) 2 gamma'(1) against central differences of f."""
    worst, n = 0.0, 0
    rng = np.random.default_rng(seed)
    per_chart = max(1, counts.gradient // len(GRADIENT_CHARTS))
    for chart_id in GRADIENT_CHARTS:
        entry = get_catalog().get(chart_id)
        K = entry.constant_curvature if entry.constant_curvature is not None else 1.0
        field_ = _field(entry, K)
        sampler = star_sampler(field_)
        for _ in range(per_chart):
            sample = sampler(rng)
            jet = field_.jet(sample.point, guess=sample.guess)
            fd = finite_difference_gradient(field_, sample.point, 1e-4)
            scale = 1.0 + float(np.max(np.abs(jet.gradient)))
            worst = max(worst, float(np.max(np.abs(fd - jet.gradient))) / scale)
            n += 1
    return IdentityResult("gradient-formula", worst, 1e-5, n)


def _laplacian_patches() -> list[tuple[ImmersedPatch, float]]:
    m3 = get_catalog().get("minkowski:3").chart
    m4 = get_catalog().get("minkowski:4").chart
    return [
        (slice_patch(m3, 0.0, ((-0.5, 0.5), (-0.5, 0.5))), 2.0),
        (round_sphere(m3, 1.0), 2.0),
        (round_sphere(m4, 1.0), 2.0),
        (hyperboloid(m3, 1, 0.0, ((-0.5, 0.5), (-0.5, 0.5))), 4.0),
    ]


def laplacian_identity(counts: SuiteCounts, seed: int) -> IdentityResult:
    """Delta u computed on the patch against the frame trace of Hess f minus k g(H, grad f)."""
    worst, n = 0.0, 0
    for patch, radius in _laplacian_patches():
        q = np.zeros(patch.chart.dim)
        field_ = ComparisonField(patch.chart, q, 0.0, StarRegion(q, radius))
        for u in patch.grid(counts.grid_n):
            sample = restricted_laplacian(patch, field_, u)
            worst = max(worst, sample.residual)
            n += 1
    return IdentityResult("laplacian-identity", worst, 1e-4, n)


def grw_cross_validation(counts: SuiteCounts, seed: int) -> IdentityResult:
    """Warping criterion and plane sampling agree; the residual counts disagreements."""
    disagreements, n = 0, 0
    for chart_id in GRW_CHARTS[: counts.grw_charts]:
        entry = get_catalog().get(chart_id)
        for K in (-1.0, 0.0, 1.0):
            for direction in ("upper", "lower"):
                report = cross_validate_grw(entry.warped, K, direction, counts.grw_planes, seed,
                                            chart_id=chart_id)
                disagreements += report.status != "pass"
                n += 1
    return IdentityResult("grw-cross-validation", float(disagreements), 0.0, n)


def triangle_equality(counts: SuiteCounts, seed: int) -> IdentityResult:
    """Chart and model energies coincide on constant-curvature charts."""
    worst, n = 0.0, 0
    for chart_id, K in HESSIAN_CASES:
        entry = get_catalog().get(chart_id)
        triangles = sample_triangles(entry.chart, entry.base_point, entry.star_radius,
                                     counts.triangles, seed)
        report = compare_triangles(entry.chart, K, triangles, n_pairs=counts.pairs, seed=seed)
        if report.min_margin is None:
            raise NumericError(f"{chart_id}: no triangle could be compared")
        worst = max(worst, abs(report.min_margin), abs(report.max_margin))
        n += report.n_samples
    return IdentityResult("triangle-equality", worst, 1e-5, n)


def _round_trips(counts: SuiteCounts, seed: int) -> tuple[float, float, int]:
    rng = np.random.default_rng(seed)
    worst_trip, worst_drift, n = 0.0, 0.0, 0
    for chart_id in SHOOTING_CHARTS:
        entry = get_catalog().get(chart_id)
        region = StarRegion(entry.base_point, 0.8 * entry.star_radius)
        for _ in range(counts.round_trips // len(SHOOTING_CHARTS)):
            v = region.sample(rng)
            arc = integrate_geodesic(entry.chart, entry.base_point, v, 1.0)
            p = exp_map(entry.chart, entry.base_point, v)
            back = inverse_exp(entry.chart, entry.base_point, p)
            worst_trip = max(worst_trip, float(np.max(np.abs(back - v))))
            worst_drift = max(worst_drift, arc.max_drift)
            n += 1
    return worst_trip, worst_drift, n


def shooting_round_trip(counts: SuiteCounts, seed: int) -> IdentityResult:
    trip, _, n = _round_trips(counts, seed)
    return IdentityResult("shooting-round-trip", trip, 1e-7, n)


def speed_drift(counts: SuiteCounts, seed: int) -> IdentityResult:
    _, drift, n = _round_trips(counts, seed)
    return IdentityResult("speed-drift", drift, 1e-8, n)


SUITE: list[Callable[[SuiteCounts, int], IdentityResult]] = [
    calibration,
    basis_independence,
    christoffel_agreement,
    series_consistency,
    lambda_positivity,
    hessian_identity,
    vertex_behavior,
    gradient_formula,
    laplacian_identity,
    grw_cross_validation,
    triangle_equality,
    shooting_round_trip,
    speed_drift,
]


def _run_one(check: Callable[[SuiteCounts, int], IdentityResult], counts: SuiteCounts,
             seed: int) -> IdentityResult:
    name = check.__name__.replace("_", "-")
    try:
        result = check(counts, seed)
    except LabError as e:
        logger.error("identity_errored", identity=name, error=str(e))
        result = IdentityResult(name, math.inf, 0.0, 0, error=f"{type(e).__name__}: {e}")
    logger.info("identity_checked", identity=result.name, residual=result.residual,
                tolerance=result.tolerance, passed=result.passed)
    return result


def verify_identities(full: bool = False, seed: int = 0,
                      only: list[str] | None = None) -> CheckReport:
    """
    Run the identity suite.

    Args:
        full: Use acceptance sample counts instead of the reduced ones
        seed: Seed shared by every sampled identity
        only: Restrict to identities with these names

    Returns:
        Report of kind "identities"; PASS iff every identity holds
    """
    counts = FULL if full else REDUCED
    checks = [c for c in SUITE if only is None or c.__name__.replace("_", "-") in only]
    results = [_run_one(check, counts, seed) for check in checks]
    failed = [r.name for r in results if not r.passed]
    rows = [
        [float(i), r.residual, r.tolerance, float(r.passed)] for i, r in enumerate(results)
    ]
    return CheckReport(
        check_id="identities",
        kind="identities",
        chart="catalog",
        n_samples=sum(r.n for r in results),
        status="fail" if failed else "pass",
        verdict="VIOLATED" if failed else "ALL-HOLD",
        reasons=failed,
        details={"full": full, "identities": [r.as_dict() for r in results]},
        series={
            "identities": Series(columns=["index", "residual", "tolerance", "passed"], rows=rows)
        },
    )
