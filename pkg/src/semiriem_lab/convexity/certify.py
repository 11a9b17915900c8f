"""Sampled certification of lambda-convexity and space-time convexity."""

from collections.abc import Callable
from dataclasses import dataclass, replace

import numpy as np
import structlog

from semiriem_lab.config import get_settings
from semiriem_lab.convexity.comparison import (
    ComparisonField,
    ScalarField,
    energy_bound_slack,
    lorentzian_window,
    warped_lift,
)
from semiriem_lab.convexity.hessian import hessian_matrix, hessian_quadratic_form
from semiriem_lab.errors import LeftDomain, NumericError, SamplerExhausted
from semiriem_lab.geodesics import StarRegion, exp_map
from semiriem_lab.manifolds.chart import MetricChart
from semiriem_lab.manifolds.warped import WarpedProductSpec
from semiriem_lab.models.reports import CheckReport, SampleRecord, Series

logger = structlog.get_logger()

MAX_ATTEMPTS = 200
# directions with |g(v,v)| / |v|^2 below this are redrawn
MIN_CAUSAL_RATIO = 0.05
STRICT_MARGIN = 1e-3
# keeps explicit-field stencils (reach 2h = 0.02) inside the domain
STENCIL_MARGIN = 0.05
# fraction of the star radius kept clear for Hessian stencils (reach 2h = 0.02 r)
STAR_INSET = 0.05


@dataclass(frozen=True)
class PointSample:
    """A sampled point with a tangent direction and an optional shooting guess."""

    point: np.ndarray
    direction: np.ndarray
    guess: np.ndarray | None = None
    energy: float | None = None


Sampler = Callable[[np.random.Generator], PointSample]


def _direction(chart: MetricChart, p: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    for _ in range(MAX_ATTEMPTS):
        d = rng.standard_normal(chart.dim)
        d /= np.linalg.norm(d)
        if abs(chart.inner(p, d, d)) >= MIN_CAUSAL_RATIO:
            return d
    raise SamplerExhausted("no direction with a usable causal ratio")


def star_sampler(field: ComparisonField) -> Sampler:
    """Points exp_q(v_q) for v_q uniform in the star region, inside the field's energy bound."""
    chart, q, K = field.chart, field.q, field.K
    inner = replace(field.region, margin=STAR_INSET * field.region.radius)

    def sample(rng: np.random.Generator) -> PointSample:
        for _ in range(MAX_ATTEMPTS):
            vq = inner.sample(rng)
            energy = chart.inner(q, vq, vq)
            if energy_bound_slack(K, energy, field.mode) <= 0:
                continue
            try:
                p = exp_map(chart, q, vq)
            except LeftDomain:
                continue
            return PointSample(p, _direction(chart, p, rng), guess=vq, energy=energy)
        raise SamplerExhausted(f"{chart.name}: no admissible point in {MAX_ATTEMPTS} draws")

    return sample


def box_sampler(chart: MetricChart, box: tuple[tuple[float, float], ...] | None = None,
                margin: float = 0.0) -> Sampler:
    """Points uniform in a coordinate box (the chart's sample box by default)."""
    box = box or chart.sample_box
    lows = np.array([b[0] for b in box])
    highs = np.array([b[1] for b in box])

    def sample(rng: np.random.Generator) -> PointSample:
        for _ in range(MAX_ATTEMPTS):
            p = rng.uniform(lows, highs)
            if chart.contains(p, margin):
                return PointSample(p, _direction(chart, p, rng))
        raise SamplerExhausted(f"{chart.name}: sample box misses the domain")

    return sample


def _record(
    sample: PointSample, margin: float, g_vv: float | None = None, **values
) -> SampleRecord:
    return SampleRecord(
        point=sample.point.tolist(),
        direction=sample.direction.tolist(),
        margin=margin,
        g_vv=g_vv,
        energy=sample.energy,
        values={k: float(v) for k, v in values.items()},
    )


def _field_k(field: ScalarField) -> float | None:
    return field.K if isinstance(field, ComparisonField) else None


def _field_q(field: ScalarField) -> list[float] | None:
    return field.q.tolist() if isinstance(field, ComparisonField) else None


def _series_x(field: ScalarField, sample: PointSample) -> float:
    if sample.energy is not None:
        return sample.energy
    axis = field.chart.time_axis or 0
    return float(sample.point[axis])


def certify_lambda_convex(
    field: ScalarField,
    sampler: Sampler,
    n_samples: int,
    seed: int = 0,
    lambda_fn: Callable[[PointSample], float] | None = None,
    tol: float | None = None,
    check_id: str = "convexity",
) -> CheckReport:
    """
    Sampled check of (f o gamma)'' >= lambda g(gamma', gamma').

    The margin at a sample is Hess f(v, v) - lambda(p) g(v, v) for the normalized
    direction v. PASS iff the minimum margin is >= -tol.
    """
    tol = get_settings().convexity_tol if tol is None else tol
    rng = np.random.default_rng(seed)
    margins: list[float] = []
    worst: SampleRecord | None = None
    rows: list[list[float]] = []
    errors = 0
    for i in range(n_samples):
        sample = sampler(rng)
        try:
            hs = hessian_quadratic_form(field, sample.point, sample.direction, guess=sample.guess)
            if lambda_fn is not None:
                lam = lambda_fn(sample)
            else:
                lam = field.lam(sample.point, energy=sample.energy)
        except NumericError as e:
            errors += 1
            logger.error("convexity_sample_failed", sample=i, error=str(e))
            continue
        margin = hs.value - lam * hs.g_vv
        margins.append(margin)
        rows.append([_series_x(field, sample), margin])
        if worst is None or margin < worst.margin:
            worst = _record(sample, margin, hs.g_vv, hessian=hs.value, **{"lambda": lam})

    if not margins:
        return CheckReport(
            check_id=check_id, kind="convexity", chart=field.chart.name, n_samples=0, tol=tol,
            status="error", message=f"all {n_samples} samples failed",
        )
    min_margin = min(margins)
    return CheckReport(
        check_id=check_id,
        kind="convexity",
        chart=field.chart.name,
        K=_field_k(field),
        q=_field_q(field),
        n_samples=len(margins),
        tol=tol,
        min_margin=min_margin,
        max_margin=max(margins),
        worst_sample=worst,
        status="pass" if min_margin >= -tol else "fail",
        details={
            "field": field.name,
            "errors": errors,
            "strict_count": sum(1 for m in margins if m > STRICT_MARGIN),
        },
        series={"margin": Series(columns=["x", "margin"], rows=rows)},
    )


def certify_spacetime_convex(
    field: ScalarField,
    sampler: Sampler,
    n_samples: int,
    seed: int = 0,
    tol: float | None = None,
    check_id: str = "spacetime-convexity",
) -> CheckReport:
    """
    Sampled check of space-time convexity.

    At each sample p: Hess f - lambda g must be positive semidefinite (its smallest
    eigenvalue against the coordinate Euclidean metric is the margin), lambda(p) > 0,
    and Hess f must have exactly one negative eigenvalue.
    """
    chart = field.chart
    if not chart.is_lorentzian:
        raise ValueError(f"chart {chart.name} is not Lorentzian")
    tol = get_settings().convexity_tol if tol is None else tol
    rng = np.random.default_rng(seed)
    margins: list[float] = []
    failures: set[str] = set()
    worst: SampleRecord | None = None
    worst_failure: SampleRecord | None = None
    worst_rank: tuple[int, float] = (2, 0.0)
    rows: list[list[float]] = []
    errors = 0
    for i in range(n_samples):
        sample = sampler(rng)
        try:
            hess = hessian_matrix(field, sample.point, guess=sample.guess)
            lam = field.lam(sample.point, energy=sample.energy)
        except NumericError as e:
            errors += 1
            logger.error("spacetime_sample_failed", sample=i, error=str(e))
            continue
        g = chart.metric(sample.point)
        eigenvalues = np.linalg.eigvalsh(hess)
        negatives = int(np.sum(eigenvalues < -tol))
        margin = float(np.min(np.linalg.eigvalsh(hess - lam * g)))
        margins.append(margin)
        rows.append([_series_x(field, sample), margin, float(negatives)])
        record = _record(
            sample, margin, None, **{"lambda": lam, "negatives": negatives,
                                     "min_eigenvalue": eigenvalues[0]},
        )
        bad = []
        if margin < -tol:
            bad.append("margin")
        if lam <= 0:
            bad.append("lambda")
        if negatives != 1:
            bad.append("signature")
        if bad:
            failures.update(bad)
            # signature failures outrank margin failures
            rank = (0 if negatives != 1 else 1, margin)
            if worst_failure is None or rank < worst_rank:
                worst_failure, worst_rank = record, rank
        if worst is None or margin < worst.margin:
            worst = record

    if not margins:
        return CheckReport(
            check_id=check_id, kind="spacetime-convexity", chart=chart.name, tol=tol,
            status="error", message=f"all {n_samples} samples failed",
        )
    reasons = sorted(failures)
    return CheckReport(
        check_id=check_id,
        kind="spacetime-convexity",
        chart=chart.name,
        K=_field_k(field),
        q=_field_q(field),
        n_samples=len(margins),
        tol=tol,
        min_margin=min(margins),
        max_margin=max(margins),
        worst_sample=worst_failure or worst,
        status="fail" if reasons else "pass",
        reasons=reasons,
        details={
            "field": field.name,
            "errors": errors,
            "failing_samples": sum(1 for r in rows if r[1] < -tol or r[2] != 1),
        },
        series={"margin": Series(columns=["x", "margin", "negatives"], rows=rows)},
    )


def gi_warped_candidate(
    spec: WarpedProductSpec,
    region: tuple[float, float] | None = None,
    n_samples: int = 100,
    seed: int = 0,
    tol: float | None = None,
) -> CheckReport:
    """
    Space-time convexity of the lift of -f^2/2 over a sub-interval of the GRW base.

    The report also carries the sub-interval on which the lift's Hessian keeps
    Lorentzian signature.
    """
    if region is not None:
        spec = WarpedProductSpec(
            region, spec.warping, spec.fiber_dim, spec.fiber_curvature, name=spec.name
        )
    chart = spec.to_chart()
    field = warped_lift(spec, chart)
    report = certify_spacetime_convex(
        field, box_sampler(chart, margin=STENCIL_MARGIN), n_samples, seed, tol,
        check_id=f"gi-candidate:{spec.name}",
    )
    window = lorentzian_window(spec)
    report.details["interval"] = list(spec.compact_window())
    report.details["lorentzian_window"] = list(window) if window is not None else None
    logger.info(
        "gi_candidate_checked", spec=spec.name, status=report.status,
        interval=report.details["interval"], lorentzian_window=report.details["lorentzian_window"],
    )
    return report


def comparison_spacetime_region(
    chart: MetricChart,
    K: float,
    q,
    radius: float,
    n_samples: int,
    seed: int = 0,
    tol: float | None = None,
) -> CheckReport:
    """Space-time convexity of f_{K,q} itself on the region E_q < pi^2/(4K)."""
    field = ComparisonField(chart, np.asarray(q, dtype=float), K, StarRegion(q, radius), "quarter")
    return certify_spacetime_convex(
        field, star_sampler(field), n_samples, seed, tol,
        check_id=f"comparison-spacetime:{chart.name}",
    )
