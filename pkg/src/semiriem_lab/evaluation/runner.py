"""Batch driver: executes the checks of a run configuration and writes reports."""

import hashlib
import json
import math
import time
from pathlib import Path

import numpy as np
import structlog

from semiriem_lab import __version__
from semiriem_lab.config import get_settings, settings_override
from semiriem_lab.convexity import (
    ComparisonField,
    box_sampler,
    certify_lambda_convex,
    certify_spacetime_convex,
    comparison_spacetime_region,
    gi_warped_candidate,
    minkowski_quadratic,
    shape_operator_track,
    star_sampler,
    track_report,
    warped_lift,
)
from semiriem_lab.convexity.certify import STENCIL_MARGIN
from semiriem_lab.curvature_bounds import (
    BoundQuery,
    certify_bound,
    cross_validate_grw,
    grw_admissible,
)
from semiriem_lab.errors import ConfigInvalid, HypothesisFailed, NumericError, UnknownChart
from semiriem_lab.evaluation.identities import verify_identities
from semiriem_lab.evaluation.series import write_report
from semiriem_lab.geodesics import StarRegion
from semiriem_lab.manifolds.catalog import CatalogEntry, get_catalog
from semiriem_lab.manifolds.chart import MetricChart
from semiriem_lab.manifolds.profiles import build_profile
from semiriem_lab.manifolds.warped import WarpedProductSpec
from semiriem_lab.models import (
    CheckOutcome,
    CheckReport,
    CheckSpec,
    PatchSpec,
    RunConfig,
    RunManifest,
    to_json,
)
from semiriem_lab.observability import CHECK_LATENCY, CHECKS_RUN, get_metrics
from semiriem_lab.submanifolds import (
    ImmersedPatch,
    audit_obstruction,
    closed_geodesic,
    compact_maximum_check,
    geodesic_segment,
    graph_patch,
    hyperboloid,
    round_sphere,
    slice_patch,
)
from semiriem_lab.triangles import compare_triangles, sample_triangles

logger = structlog.get_logger()

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_CONFIG = 2
EXIT_NUMERIC = 3

MANIFEST_NAME = "manifest.json"
METRICS_NAME = "metrics.prom"


def derive_seed(master: int, index: int) -> int:
    """sha256 of [master, index], truncated to 63 bits."""
    digest = hashlib.sha256(json.dumps([master, index]).encode()).digest()
    return int.from_bytes(digest[:8], "big") >> 1


def config_hash(config: RunConfig) -> str:
    canonical = json.dumps(config.model_dump(mode="json"), sort_keys=True)
    return hashlib.sha256(canonical.encode()).hexdigest()


def register_user_charts(config: RunConfig) -> None:
    catalog = get_catalog()
    catalog.clear_user()
    for spec in config.user_charts:
        warping = spec.warping
        profile = build_profile(
            warping.family, amplitude=warping.amplitude, rate=warping.rate, shift=warping.shift,
            coefficients=warping.coefficients,
        )
        warped = WarpedProductSpec(
            spec.bounds(), profile, spec.fiber_dim, spec.fiber_curvature, name=spec.id
        )
        catalog.register_warped(
            spec.id, warped, np.array(spec.base_point), spec.star_radius, spec.constant_curvature
        )


def validate_config(config: RunConfig) -> None:
    """
    Check references the schema cannot see: chart ids against the catalog.

    Raises:
        ConfigInvalid: For the first unknown chart id
    """
    catalog = get_catalog()
    if config.chart not in catalog:
        raise ConfigInvalid("chart", f"unknown chart id {config.chart!r}")
    for i, check in enumerate(config.checks):
        if check.chart is not None and check.chart not in catalog:
            raise ConfigInvalid(f"checks.{i}.chart", f"unknown chart id {check.chart!r}")


def build_patch(spec: PatchSpec, chart: MetricChart) -> ImmersedPatch:
    box = [tuple(b) for b in spec.box] if spec.box is not None else None
    if spec.family == "slice":
        return slice_patch(chart, spec.t0, box)
    if spec.family == "round-sphere":
        return round_sphere(chart, spec.radius, spec.center)
    if spec.family == "hyperboloid":
        return hyperboloid(chart, spec.sign, spec.offset, box)
    if spec.family == "graph":
        return graph_patch(chart, spec.coefficients, box)
    if spec.family == "geodesic-segment":
        return geodesic_segment(chart, spec.p, spec.v, spec.length)
    return closed_geodesic(chart, spec.p, spec.v, spec.period)


def _warped(entry: CatalogEntry) -> WarpedProductSpec:
    if entry.warped is None:
        raise HypothesisFailed([f"{entry.chart_id} is not a GRW chart"])
    return entry.warped


def _track_length(field: ComparisonField, u: np.ndarray, sg: float) -> float:
    """Parameter length keeping t u inside the star region and E inside pi^2/K."""
    t_max = 0.9 * field.region.radius / float(np.linalg.norm(u))
    K = field.K
    if K != 0 and sg * K > 0:
        t_max = min(t_max, 0.9 * math.pi / math.sqrt(abs(K)))
    return t_max


def _shape_tracks(
    field: ComparisonField, n: int, n_times: int, seed: int, check_id: str
) -> CheckReport:
    chart = field.chart
    rng = np.random.default_rng(seed)
    tracks = []
    errors = 0
    attempts = 0
    while len(tracks) < n and attempts < 20 * n:
        attempts += 1
        d = rng.standard_normal(chart.dim)
        gdd = chart.inner(field.q, d, d)
        if abs(gdd) < 0.05 * float(d @ d):
            continue
        u = d / math.sqrt(abs(gdd))
        try:
            length = _track_length(field, u, math.copysign(1.0, gdd))
            tracks.append(shape_operator_track(field, u, length, n_times))
        except NumericError as e:
            errors += 1
            logger.warning("shape_track_failed", chart=chart.name, error=str(e))
    report = track_report(field, tracks, check_id=check_id)
    report.details["errors"] = errors
    return report


def execute_check(config: RunConfig, index: int, spec: CheckSpec) -> CheckReport:
    """Run one check; numeric failures propagate to the caller."""
    seed = spec.seed if spec.seed is not None else derive_seed(config.seed, index)
    entry = get_catalog().get(spec.chart or config.chart)
    chart = entry.chart
    q = np.array(spec.q, dtype=float) if spec.q is not None else entry.base_point
    radius = spec.radius if spec.radius is not None else entry.star_radius
    check_id = f"{index:02d}-{spec.kind}"

    def comparison_field() -> ComparisonField:
        return ComparisonField(chart, q, spec.K, StarRegion(q, radius))

    if spec.kind == "bound":
        if spec.method == "grw":
            report = grw_admissible(_warped(entry), spec.K, spec.direction, tol=spec.tol)
        elif spec.method == "cross-validate":
            report = cross_validate_grw(
                _warped(entry), spec.K, spec.direction, spec.n_samples, seed,
                chart_id=entry.chart_id,
            )
        else:
            report = certify_bound(
                BoundQuery(chart, spec.K, spec.direction, spec.n_samples, seed, tol=spec.tol),
                check_id,
            )
    elif spec.kind == "convexity":
        if spec.field == "comparison":
            field = comparison_field()
            sampler = star_sampler(field)
        elif spec.field == "minkowski-quadratic":
            field = minkowski_quadratic(chart, spec.lambda0)
            sampler = box_sampler(chart)
        else:
            field = warped_lift(_warped(entry), chart)
            sampler = box_sampler(chart, margin=STENCIL_MARGIN)
        report = certify_lambda_convex(field, sampler, spec.n_samples, seed, tol=spec.tol,
                                       check_id=check_id)
    elif spec.kind == "spacetime-convexity":
        if spec.field == "warped-lift":
            interval = tuple(spec.interval) if spec.interval is not None else None
            report = gi_warped_candidate(_warped(entry), interval, spec.n_samples, seed, spec.tol)
        elif spec.field == "minkowski-quadratic":
            report = certify_spacetime_convex(
                minkowski_quadratic(chart, spec.lambda0), box_sampler(chart), spec.n_samples, seed,
                spec.tol, check_id,
            )
        else:
            report = comparison_spacetime_region(
                chart, spec.K, q, radius, spec.n_samples, seed, spec.tol
            )
    elif spec.kind == "shape-track":
        report = _shape_tracks(comparison_field(), spec.n_samples, spec.n_times, seed, check_id)
    elif spec.kind == "triangles":
        triangles = sample_triangles(chart, q, radius, spec.n_samples, seed)
        report = compare_triangles(
            chart, spec.K, triangles, n_pairs=spec.n_pairs, seed=seed, direction=spec.direction,
            tol=spec.tol, check_id=check_id,
        )
    elif spec.kind == "submanifold-audit":
        assert spec.patch is not None
        patch = build_patch(spec.patch, chart)
        if spec.mode == "compact-maximum":
            report = compact_maximum_check(patch, comparison_field(), tol=spec.tol)
        else:
            report = audit_obstruction(patch, comparison_field(), spec.mode, spec.grid_n, spec.tol,
                                       check_id)
    else:
        report = verify_identities(full=spec.full, seed=seed)
    return report


def _captured(spec: CheckSpec, chart_id: str, status: str, error: Exception) -> CheckReport:
    reasons = error.reasons if isinstance(error, HypothesisFailed) else []
    return CheckReport(
        check_id=f"{spec.kind}:{chart_id}",
        kind=spec.kind,
        chart=chart_id,
        K=spec.K,
        status=status,
        verdict="HYPOTHESIS_FAILED" if status == "hypothesis_failed" else "ERROR",
        message=f"{type(error).__name__}: {error}",
        reasons=reasons,
    )


def exit_code_for(outcomes: list[CheckOutcome]) -> int:
    statuses = {o.status for o in outcomes}
    if "fail" in statuses:
        return EXIT_FAILED
    if "error" in statuses:
        return EXIT_NUMERIC
    return EXIT_OK


def resolve_output_dir(config: RunConfig, override: Path | None = None) -> Path:
    """Flag, then SEMIRIEM_OUTPUT_DIR, then the config, then the settings default."""
    if override is not None:
        return Path(override)
    settings = get_settings()
    if "output_dir" in settings.model_fields_set:
        return settings.output_dir
    return config.output_dir or settings.output_dir


def run(config: RunConfig, output_dir: Path | None = None, metrics: bool = False) -> RunManifest:
    """
    Execute the configured checks in declaration order.

    Every check writes a report; numeric failures are captured into an "error"
    report instead of aborting the run.

    Raises:
        ConfigInvalid: If a chart id is unknown, before any check runs
    """
    register_user_charts(config)
    validate_config(config)
    output_dir = resolve_output_dir(config, output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    logger.info("run_started", checks=len(config.checks), output_dir=str(output_dir))

    outcomes: list[CheckOutcome] = []
    files: list[str] = []
    with settings_override(**config.settings_updates()):
        for index, spec in enumerate(config.checks, start=1):
            chart_id = spec.chart or config.chart
            started = time.perf_counter()
            try:
                report = execute_check(config, index, spec)
            except HypothesisFailed as e:
                report = _captured(spec, chart_id, "hypothesis_failed", e)
            except (NumericError, UnknownChart) as e:
                logger.warning("check_errored", index=index, kind=spec.kind, error=str(e))
                report = _captured(spec, chart_id, "error", e)
            elapsed = time.perf_counter() - started
            CHECKS_RUN.labels(kind=spec.kind, status=report.status).inc()
            CHECK_LATENCY.labels(kind=spec.kind).observe(elapsed)

            written = write_report(output_dir, index, report)
            files.extend(p.name for p in written)
            outcomes.append(CheckOutcome(
                index=index, kind=spec.kind, chart=chart_id, status=report.status,
                verdict=report.verdict, report_file=written[0].name, wall_time_s=round(elapsed, 3),
            ))
            logger.info("check_finished", index=index, kind=spec.kind, status=report.status,
                        verdict=report.verdict, seconds=round(elapsed, 3))

    if metrics:
        (output_dir / METRICS_NAME).write_bytes(get_metrics())
        files.append(METRICS_NAME)
    manifest = RunManifest(
        config_hash=config_hash(config),
        version=__version__,
        outcomes=outcomes,
        files=files,
        exit_code=exit_code_for(outcomes),
    )
    (output_dir / MANIFEST_NAME).write_text(to_json(manifest))
    logger.info("run_finished", exit_code=manifest.exit_code, checks=len(outcomes))
    return manifest
