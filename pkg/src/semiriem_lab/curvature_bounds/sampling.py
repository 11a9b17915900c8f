"""Rejection sampling of nondegenerate 2-planes."""

from dataclasses import dataclass

import numpy as np
import structlog

from semiriem_lab.config import get_settings
from semiriem_lab.errors import SamplerExhausted, SamplerStarved
from semiriem_lab.manifolds.chart import MetricChart, gram_q

logger = structlog.get_logger()


@dataclass(frozen=True)
class PlaneSample:
    point: np.ndarray
    v: np.ndarray
    w: np.ndarray
    q: float


def _point(chart: MetricChart, rng: np.random.Generator, lows: np.ndarray,
           highs: np.ndarray) -> np.ndarray:
    for _ in range(1000):
        p = rng.uniform(lows, highs)
        if chart.contains(p, chart.stencil_width):
            return p
    raise SamplerExhausted(f"{chart.name}: sample box misses the domain")


def sample_planes(
    chart: MetricChart,
    n: int,
    seed: int,
    box: tuple[tuple[float, float], ...] | None = None,
    plane_tol: float | None = None,
) -> tuple[list[PlaneSample], int]:
    """
    Draw n planes with |Q| > plane_tol.

    Points are uniform in the box; the spanning pair comes from two directions uniform
    on the coordinate unit sphere, Gram-Schmidt orthonormalized in the Euclidean sense.

    Returns:
        The planes and the number of rejected candidates

    Raises:
        SamplerStarved: If the rejection rate exceeds settings.sampler_max_rejection
    """
    settings = get_settings()
    plane_tol = settings.plane_tol if plane_tol is None else plane_tol
    box = box or chart.sample_box
    lows = np.array([b[0] for b in box])
    highs = np.array([b[1] for b in box])
    budget = int(np.ceil(n / (1.0 - settings.sampler_max_rejection)))
    rng = np.random.default_rng(seed)
    planes: list[PlaneSample] = []
    rejected = 0
    while len(planes) < n:
        if len(planes) + rejected >= budget:
            raise SamplerStarved(
                f"{chart.name}: rejected {rejected} of {len(planes) + rejected} planes"
            )
        p = _point(chart, rng, lows, highs)
        a = rng.standard_normal(chart.dim)
        b = rng.standard_normal(chart.dim)
        v = a / np.linalg.norm(a)
        w = b - (b @ v) * v
        w /= np.linalg.norm(w)
        q = gram_q(chart.metric(p), v, w)
        if abs(q) <= plane_tol:
            rejected += 1
            continue
        planes.append(PlaneSample(p, v, w, q))
    if rejected:
        logger.debug("bound_sampler_rejections", chart=chart.name, rejected=rejected, kept=n)
    return planes, rejected
