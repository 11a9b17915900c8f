"""Geodesic triangles in a chart and their signed-energy comparison with model triangles."""

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
import structlog

from semiriem_lab.config import get_settings
from semiriem_lab.curvature_bounds import Direction
from semiriem_lab.errors import DegenerateTriangle, NumericError, SamplerExhausted
from semiriem_lab.geodesics import GeodesicArc, StarRegion, exp_map, integrate_geodesic, shoot
from semiriem_lab.manifolds.chart import MetricChart
from semiriem_lab.models.reports import CheckReport, SampleRecord, Series
from semiriem_lab.triangles.model import SIDES, ModelTriangle, realize_model_triangle

logger = structlog.get_logger()

MAX_ATTEMPTS = 50

SidePoint = tuple[int, float]
Pair = tuple[SidePoint, SidePoint]

MIDPOINT_PAIRS: list[Pair] = [((0, 0.5), (1, 0.5)), ((0, 0.5), (2, 0.5)), ((1, 0.5), (2, 0.5))]


@dataclass(frozen=True, eq=False)
class GeodesicTriangle:
    """Three vertices joined by distinguished geodesics, each on the affine interval [0, 1]."""

    vertices: np.ndarray
    sides: tuple[GeodesicArc, GeodesicArc, GeodesicArc]
    side_energies: tuple[float, float, float]

    def side_point(self, side: int, s: float) -> np.ndarray:
        if not 0.0 <= s <= 1.0:
            raise ValueError(f"affine fraction {s} outside [0, 1]")
        return self.sides[side].position(s)


def build_triangle(chart: MetricChart, p0, p1, p2) -> GeodesicTriangle:
    """
    Join the vertices pairwise by inverse_exp geodesics.

    Raises:
        DegenerateTriangle: If a side is null
        NoConvergence, SingularJacobian, LeftDomain: From shooting
    """
    vertices = np.array([p0, p1, p2], dtype=float)
    tol = get_settings().degeneracy_tol
    arcs: list[GeodesicArc] = []
    energies: list[float] = []
    for i, j in SIDES:
        v = shoot(chart, vertices[i], vertices[j]).v
        energy = chart.inner(vertices[i], v, v)
        if abs(energy) <= tol * max(1.0, float(v @ v)):
            raise DegenerateTriangle(f"side {i}{j} is null")
        arcs.append(integrate_geodesic(chart, vertices[i], v, 1.0))
        energies.append(energy)
    return GeodesicTriangle(vertices, tuple(arcs), tuple(energies))


def sample_triangles(
    chart: MetricChart,
    q,
    radius: float,
    n: int,
    seed: int = 0,
) -> list[GeodesicTriangle]:
    """
    n triangles with vertices exp_q(v), v uniform in the star region of the given radius.

    Candidates whose sides are null or cannot be shot are redrawn.

    Raises:
        SamplerExhausted: If too many candidates are rejected
    """
    q = np.asarray(q, dtype=float)
    region = StarRegion(q, radius)
    rng = np.random.default_rng(seed)
    triangles: list[GeodesicTriangle] = []
    rejected = 0
    while len(triangles) < n:
        if rejected >= MAX_ATTEMPTS * n:
            raise SamplerExhausted(f"{chart.name}: rejected {rejected} triangles")
        try:
            points = [exp_map(chart, q, region.sample(rng)) for _ in range(3)]
            triangles.append(build_triangle(chart, *points))
        except NumericError as e:
            rejected += 1
            logger.debug("triangle_rejected", chart=chart.name, error=str(e))
    return triangles


def random_pairs(n: int, rng: np.random.Generator) -> list[Pair]:
    """n pairs of side points with uniform sides and affine fractions."""
    pairs: list[Pair] = []
    for _ in range(n):
        sa, sb = rng.integers(0, 3, size=2)
        ta, tb = rng.uniform(0.0, 1.0, size=2)
        pairs.append(((int(sa), float(ta)), (int(sb), float(tb))))
    return pairs


def _chart_energy(chart: MetricChart, triangle: GeodesicTriangle, a: SidePoint,
                  b: SidePoint) -> float:
    pa = triangle.side_point(*a)
    pb = triangle.side_point(*b)
    if np.allclose(pa, pb, rtol=0.0, atol=1e-14):
        return 0.0
    guess = None
    if a[0] == b[0]:
        # a sub-arc of the same side
        guess = (b[1] - a[1]) * triangle.sides[a[0]].velocity(a[1])
    v = shoot(chart, pa, pb, guess=guess).v
    return chart.inner(pa, v, v)


def _margin(model_e: float, chart_e: float, direction: Direction) -> float:
    return model_e - chart_e if direction == "upper" else chart_e - model_e


def _compare_pairs(
    chart: MetricChart,
    triangle: GeodesicTriangle,
    model: ModelTriangle,
    pairs: Sequence[Pair],
    direction: Direction,
) -> list[list[float]]:
    rows = []
    for a, b in pairs:
        chart_e = _chart_energy(chart, triangle, a, b)
        model_e = model.energy(model.side_point(*a), model.side_point(*b))
        margin = _margin(model_e, chart_e, direction)
        rows.append([a[0], a[1], b[0], b[1], chart_e, model_e, margin])
    return rows


PAIR_COLUMNS = ["side_a", "s_a", "side_b", "s_b", "chart_E", "model_E", "margin"]


def compare_triangle(
    chart: MetricChart,
    K: float,
    triangle: GeodesicTriangle,
    pairs: Sequence[Pair] = MIDPOINT_PAIRS,
    direction: Direction = "upper",
    tol: float | None = None,
    check_id: str | None = None,
) -> CheckReport:
    """
    Compare chart and model signed energies between corresponding side points.

    Under R <= K the chart energy is at most the model energy, so the margin is
    model_E - chart_E (reversed for R >= K). PASS iff every margin is >= -tol.

    Raises:
        NotRealizable, DegenerateTriangle: From the model realization
        NoConvergence, SingularJacobian, LeftDomain: From shooting between side points
    """
    tol = get_settings().triangle_tol if tol is None else tol
    model = realize_model_triangle(K, *triangle.side_energies)
    rows = _compare_pairs(chart, triangle, model, pairs, direction)
    margins = [r[6] for r in rows]
    k_worst = int(np.argmin(margins))
    return CheckReport(
        check_id=check_id or f"triangle:{chart.name}:{direction}:K={K:g}",
        kind="triangles",
        chart=chart.name,
        K=K,
        n_samples=len(rows),
        tol=tol,
        min_margin=min(margins),
        max_margin=max(margins),
        worst_sample=SampleRecord(
            point=triangle.vertices.ravel().tolist(),
            margin=margins[k_worst],
            values={"chart_E": rows[k_worst][4], "model_E": rows[k_worst][5]},
        ),
        status="pass" if min(margins) >= -tol else "fail",
        details={
            "direction": direction,
            "model_signature": model.signature,
            "side_energies": list(triangle.side_energies),
        },
        series={"pairs": Series(columns=PAIR_COLUMNS, rows=rows)},
    )


def compare_triangles(
    chart: MetricChart,
    K: float,
    triangles: Sequence[GeodesicTriangle],
    pairs: Sequence[Pair] | None = None,
    n_pairs: int = 3,
    seed: int = 0,
    direction: Direction = "upper",
    tol: float | None = None,
    check_id: str | None = None,
) -> CheckReport:
    """
    Batch comparison over many triangles.

    Each triangle uses `pairs` when given, otherwise n_pairs random pairs. Triangles
    that fail numerically are counted and skipped.
    """
    tol = get_settings().triangle_tol if tol is None else tol
    rng = np.random.default_rng(seed)
    rows: list[list[float]] = []
    worst: SampleRecord | None = None
    signatures: dict[str, int] = {}
    errors = 0
    for index, triangle in enumerate(triangles):
        chosen = pairs if pairs is not None else random_pairs(n_pairs, rng)
        try:
            model = realize_model_triangle(K, *triangle.side_energies)
            tri_rows = _compare_pairs(chart, triangle, model, chosen, direction)
        except NumericError as e:
            errors += 1
            logger.warning(
                "triangle_comparison_failed", chart=chart.name, index=index, error=str(e)
            )
            continue
        signatures[model.signature] = signatures.get(model.signature, 0) + 1
        for row in tri_rows:
            rows.append([float(index)] + row)
            if worst is None or row[6] < worst.margin:
                worst = SampleRecord(
                    point=triangle.vertices.ravel().tolist(),
                    margin=row[6],
                    values={"triangle": float(index), "chart_E": row[4], "model_E": row[5]},
                )
    if not rows:
        raise SamplerExhausted(f"{chart.name}: every triangle comparison failed")
    margins = [r[7] for r in rows]
    min_margin = min(margins)
    status = "pass" if min_margin >= -tol else "fail"
    logger.info(
        "triangles_compared", chart=chart.name, K=K, direction=direction, status=status,
        triangles=len(triangles) - errors, min_margin=min_margin,
    )
    return CheckReport(
        check_id=check_id or f"triangles:{chart.name}:{direction}:K={K:g}",
        kind="triangles",
        chart=chart.name,
        K=K,
        n_samples=len(rows),
        tol=tol,
        min_margin=min_margin,
        max_margin=max(margins),
        worst_sample=worst,
        status=status,
        details={
            "direction": direction,
            "triangles": len(triangles),
            "errors": errors,
            "model_signatures": signatures,
            "strict_count": sum(1 for m in margins if m > 1e-3),
        },
        series={"pairs": Series(columns=["triangle"] + PAIR_COLUMNS, rows=rows)},
    )


def falsify_bound(
    chart: MetricChart,
    K: float,
    direction: Direction,
    triangles: Sequence[GeodesicTriangle],
    pairs: Sequence[Pair] | None = None,
    n_pairs: int = 3,
    seed: int = 0,
    tol: float | None = None,
) -> CheckReport:
    """
    Try to refute R <= K (or R >= K) by a failed triangle comparison.

    REFUTED when some margin is below -tol, with the failing pair as the worst sample;
    INCONCLUSIVE otherwise. The bound is never certified this way.
    """
    report = compare_triangles(chart, K, triangles, pairs, n_pairs, seed, direction, tol)
    refuted = not report.passed
    return report.model_copy(
        update={
            "check_id": f"falsify:{chart.name}:{direction}:K={K:g}",
            "kind": "triangle-falsifier",
            "verdict": "REFUTED" if refuted else "INCONCLUSIVE",
            "message": None if refuted else "no comparison failed; the bound is not certified",
        }
    )
