"""Curvature bounds R <= K and R >= K by direct plane sampling."""

from dataclasses import dataclass
from typing import Literal

import numpy as np
import structlog

from semiriem_lab.config import get_settings
from semiriem_lab.curvature_bounds.sampling import sample_planes
from semiriem_lab.manifolds.chart import MetricChart, PlaneSection
from semiriem_lab.manifolds.curvature import curvature_numerator, riemann_tensor
from semiriem_lab.models.reports import BoundReport, CheckReport, ClassStats, PlaneWitness, Series

logger = structlog.get_logger()

Direction = Literal["upper", "lower"]


@dataclass(frozen=True, eq=False)
class BoundQuery:
    """
    A bound to certify: R <= K ("upper") or R >= K ("lower").

    R <= K means spacelike sectional curvatures are <= K and timelike ones are >= K,
    i.e. g(R(v,w)v,w) <= K Q(v,w) for every plane.
    """

    chart: MetricChart
    K: float
    direction: Direction = "upper"
    n_samples: int = 1000
    seed: int = 0
    box: tuple[tuple[float, float], ...] | None = None
    tol: float | None = None

    def __post_init__(self):
        if self.n_samples < 1:
            raise ValueError("n_samples must be >= 1")
        if self.direction not in ("upper", "lower"):
            raise ValueError(f"unknown direction {self.direction!r}")


def _signed(raw: float, direction: Direction) -> float:
    return raw if direction == "upper" else -raw


def plane_margin(plane: PlaneSection, K: float, direction: Direction = "upper",
                 tol: float | None = None) -> float:
    """
    K Q - g(R(v,w)v,w) for "upper", its negative for "lower".

    Raises:
        DegeneratePlane: If |Q| is below tolerance
    """
    tol = get_settings().plane_tol if tol is None else tol
    q = plane.require_nondegenerate(tol)
    numerator = curvature_numerator(
        plane.chart, plane.point, plane.v.components, plane.w.components
    )
    return _signed(K * q - numerator, direction)


def _plane_class(chart: MetricChart, q: float) -> str:
    if chart.index == 0:
        return "riemannian"
    return "spacelike" if q > 0 else "timelike"


def certify_bound(query: BoundQuery, check_id: str | None = None) -> BoundReport:
    """
    Sample nondegenerate planes and report the worst margin with its witness.

    Margins are normalized by the Gram scale |g(v,v)g(w,w)| + g(v,w)^2; per-class
    statistics report the sectional-curvature slack margin/|Q|.
    """
    chart, K, direction = query.chart, query.K, query.direction
    tol = get_settings().bound_tol if query.tol is None else query.tol
    planes, rejected = sample_planes(chart, query.n_samples, query.seed, query.box)

    by_class: dict[str, list[float]] = {}
    worst: PlaneWitness | None = None
    rows: list[list[float]] = []
    for plane in planes:
        g = chart.metric(plane.point)
        gvv = plane.v @ g @ plane.v
        gww = plane.w @ g @ plane.w
        gvw = plane.v @ g @ plane.w
        riemann = riemann_tensor(chart, plane.point)
        numerator = curvature_numerator(chart, plane.point, plane.v, plane.w, riemann)
        raw = _signed(K * plane.q - numerator, direction)
        margin = float(raw / (abs(gvv * gww) + gvw * gvw))
        cls = _plane_class(chart, plane.q)
        by_class.setdefault(cls, []).append(float(raw / abs(plane.q)))
        rows.append([plane.q, numerator / plane.q, margin])
        if worst is None or margin < worst.margin:
            worst = PlaneWitness(
                point=plane.point.tolist(),
                v=plane.v.tolist(),
                w=plane.w.tolist(),
                q=float(plane.q),
                numerator=float(numerator),
                sectional=float(numerator / plane.q),
                margin=margin,
                plane_class=cls,
            )

    margins = [r[2] for r in rows]
    min_margin = min(margins)
    status = "pass" if min_margin >= -tol else "fail"
    logger.info(
        "bound_certified", chart=chart.name, K=K, direction=direction, status=status,
        min_margin=min_margin,
    )
    return BoundReport(
        check_id=check_id or f"bound:{chart.name}:{direction}:K={K:g}",
        kind="bound",
        chart=chart.name,
        K=K,
        n_samples=len(planes),
        tol=tol,
        min_margin=min_margin,
        max_margin=max(margins),
        status=status,
        direction=direction,
        witness=worst,
        per_class={cls: ClassStats.from_margins(vals) for cls, vals in sorted(by_class.items())},
        details={"rejected": rejected, "seed": query.seed},
        series={"planes": Series(columns=["Q", "sectional", "margin"], rows=rows)},
    )


def bisect_bound(
    chart: MetricChart,
    K_lo: float,
    K_hi: float,
    direction: Direction = "upper",
    iterations: int = 8,
    n_samples: int = 500,
    seed: int = 0,
) -> CheckReport:
    """
    Coarse bisection over [K_lo, K_hi] for the K at which the bound's verdict flips.

    The order R <= K is not monotone in K, so the result is a bracket in which some
    flip happens, not an optimal K.
    """
    def passes(K: float) -> bool:
        return certify_bound(BoundQuery(chart, K, direction, n_samples, seed)).passed

    lo_pass, hi_pass = passes(K_lo), passes(K_hi)
    lo, hi = K_lo, K_hi
    if lo_pass != hi_pass:
        for _ in range(iterations):
            mid = 0.5 * (lo + hi)
            if passes(mid) == lo_pass:
                lo = mid
            else:
                hi = mid
    flipped = lo_pass != hi_pass
    return CheckReport(
        check_id=f"bisect:{chart.name}:{direction}",
        kind="bound-bisection",
        chart=chart.name,
        n_samples=n_samples,
        status="pass",
        verdict="FLIP" if flipped else "NO-FLIP",
        details={
            "bracket": [lo, hi],
            "lo_pass": lo_pass,
            "hi_pass": hi_pass,
            "direction": direction,
            "iterations": iterations if flipped else 0,
        },
    )
