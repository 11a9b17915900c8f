"""Closed-form curvature-bound criterion for GRW spaces, and its cross-validation."""

import numpy as np
import structlog

from semiriem_lab.config import get_settings
from semiriem_lab.curvature_bounds.bounds import BoundQuery, Direction, certify_bound
from semiriem_lab.errors import GridExitsInterval
from semiriem_lab.manifolds.warped import WarpedProductSpec
from semiriem_lab.models.reports import BoundReport, CheckReport, ClassStats, SampleRecord, Series

logger = structlog.get_logger()


def grw_admissible(
    spec: WarpedProductSpec,
    K: float,
    direction: Direction = "upper",
    grid_n: int | None = None,
    tol: float | None = None,
) -> BoundReport:
    """
    Check R <= K (or R >= K) on -I x_f F from the warping function alone.

    Upper: f'' >= K f and, when dim F >= 2, C_F <= K f^2 - f'^2. Lower reverses both.
    Margins are in sectional-curvature units: f''/f - K on mixed planes and
    (K f^2 - f'^2 - C_F)/f^2 on fiber planes, negated for the lower bound.

    Raises:
        GridExitsInterval: If the compact window misses the interval
    """
    settings = get_settings()
    grid_n = settings.grw_grid_n if grid_n is None else grid_n
    tol = settings.bound_tol if tol is None else tol
    if grid_n < 2:
        raise ValueError("grid_n must be >= 2")
    lo, hi = spec.compact_window(settings.grw_window, settings.grw_margin)
    if not lo < hi:
        raise GridExitsInterval(f"window [{lo:g}, {hi:g}] does not fit in {spec.interval}")
    taus = np.linspace(lo, hi, grid_n)
    sign = 1.0 if direction == "upper" else -1.0
    C = spec.fiber_curvature

    mixed: list[float] = []
    fiber: list[float] = []
    rows: list[list[float]] = []
    worst: SampleRecord | None = None
    worst_label = "mixed"
    for tau in taus:
        f, df, ddf = spec.warping.jet(tau)
        m = sign * (ddf / f - K)
        mixed.append(m)
        fm = sign * (K * f * f - df * df - C) / (f * f) if spec.fiber_dim >= 2 else None
        if fm is not None:
            fiber.append(fm)
        rows.append([float(tau), m] + ([fm] if fm is not None else []))
        for label, value in (("mixed", m), ("fiber", fm)):
            if value is not None and (worst is None or value < worst.margin):
                worst = SampleRecord(point=[float(tau)], margin=float(value))
                worst_label = label

    margins = mixed + fiber
    min_margin = float(min(margins))
    status = "pass" if min_margin >= -tol else "fail"
    return BoundReport(
        check_id=f"grw:{spec.name}:{direction}:K={K:g}",
        kind="grw-bound",
        chart=spec.name,
        K=K,
        n_samples=len(taus),
        tol=tol,
        min_margin=min_margin,
        max_margin=float(max(margins)),
        worst_sample=worst,
        status=status,
        direction=direction,
        per_class={
            "mixed": ClassStats.from_margins(mixed),
            **({"fiber": ClassStats.from_margins(fiber)} if fiber else {}),
        },
        details={"window": [float(lo), float(hi)], "worst_condition": worst_label},
        series={"grid": Series(columns=["tau", "mixed"] + (["fiber"] if fiber else []), rows=rows)},
    )


def cross_validate_grw(
    spec: WarpedProductSpec,
    K: float,
    direction: Direction = "upper",
    n_samples: int = 2000,
    seed: int = 0,
    grid_n: int | None = None,
    chart_id: str | None = None,
) -> CheckReport:
    """PASS iff plane sampling and the warping criterion give the same verdict."""
    chart = spec.to_chart(name=chart_id)
    sampled = certify_bound(BoundQuery(chart, K, direction, n_samples, seed))
    closed = grw_admissible(spec, K, direction, grid_n)
    agree = sampled.status == closed.status
    verdict = f"AGREE-{sampled.status.upper()}" if agree else "DISAGREE"
    if not agree:
        logger.warning(
            "grw_cross_validation_disagrees", chart=chart.name, K=K, direction=direction,
            sampled=sampled.status, closed=closed.status,
        )
    return CheckReport(
        check_id=f"grw-cross:{chart.name}:{direction}:K={K:g}",
        kind="grw-cross-validation",
        chart=chart.name,
        K=K,
        n_samples=sampled.n_samples,
        tol=sampled.tol,
        min_margin=min(sampled.min_margin, closed.min_margin),
        status="pass" if agree else "fail",
        verdict=verdict,
        details={
            "direction": direction,
            "sampled_status": sampled.status,
            "sampled_min_margin": sampled.min_margin,
            "grid_status": closed.status,
            "grid_min_margin": closed.min_margin,
            "grid_worst_tau": closed.worst_sample.point[0] if closed.worst_sample else None,
            "grid_worst_condition": closed.details["worst_condition"],
            "witness": sampled.witness.model_dump() if sampled.witness else None,
        },
    )
