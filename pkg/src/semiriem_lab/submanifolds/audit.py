"""Laplacian of restricted fields and the trapped-submanifold obstruction audits."""

from dataclasses import dataclass
from typing import Literal

import numpy as np
import structlog
from scipy import optimize

from semiriem_lab.config import get_settings
from semiriem_lab.convexity.comparison import (
    ComparisonField,
    FieldJet,
    ScalarField,
    energy_bound_slack,
    lambda_value,
)
from semiriem_lab.convexity.hessian import second_derivative
from semiriem_lab.errors import SpacelikeViolation
from semiriem_lab.models.reports import CheckReport, SampleRecord, Series
from semiriem_lab.submanifolds.extrinsic import (
    ExtrinsicData,
    TrappedClass,
    classify_trapped,
    induced_metric,
    second_fundamental_form,
)
from semiriem_lab.submanifolds.patch import ImmersedPatch

logger = structlog.get_logger()

AuditMode = Literal["minimal", "trapped"]

LAMBDA_FLOOR = 1e-6
HE_TOL = 1e-6


@dataclass(frozen=True, eq=False)
class LaplacianSample:
    """Both evaluations of the Laplacian of u = f o phi at one parameter point."""

    u: np.ndarray
    value: float
    direct: float
    identity: float
    jet: FieldJet
    extrinsic: ExtrinsicData

    @property
    def residual(self) -> float:
        return abs(self.direct - self.identity) / (1.0 + abs(self.direct))


def _restricted_values(patch: ImmersedPatch, field: ScalarField, center: FieldJet):
    near = center.shooting

    def value(params: np.ndarray) -> float:
        return field.jet(patch.point(params), near=near).value

    return value


def _induced_christoffel(patch: ImmersedPatch, u: np.ndarray, h: float) -> np.ndarray:
    """Gamma(h)^c_ab from 4th-order differences of the induced metric."""
    k = patch.k
    dh = np.zeros((k, k, k))
    for c in range(k):
        e = np.zeros(k)
        e[c] = h
        dh[c] = (
            -induced_metric(patch, u + 2 * e) + 8 * induced_metric(patch, u + e)
            - 8 * induced_metric(patch, u - e) + induced_metric(patch, u - 2 * e)
        ) / (12 * h)
    h_inv = np.linalg.inv(induced_metric(patch, u))
    lowered = np.transpose(dh, (1, 0, 2)) + np.transpose(dh, (1, 2, 0)) - dh
    return 0.5 * np.einsum("cd,dab->cab", h_inv, lowered)


def laplace_beltrami(patch: ImmersedPatch, value, u: np.ndarray, center: float,
                     step: float) -> float:
    """h^ab (d_a d_b u - Gamma(h)^c_ab d_c u) from parameter-grid stencils."""
    k = patch.k
    h = step
    eye = np.eye(k) * h
    grad = np.zeros(k)
    second = np.zeros((k, k))
    for a in range(k):
        p1, m1 = value(u + eye[a]), value(u - eye[a])
        p2, m2 = value(u + 2 * eye[a]), value(u - 2 * eye[a])
        grad[a] = (-p2 + 8 * p1 - 8 * m1 + m2) / (12 * h)
        second[a, a] = (-p2 + 16 * p1 - 30 * center + 16 * m1 - m2) / (12 * h * h)
    for a in range(k):
        for b in range(a + 1, k):
            def mixed(s: float) -> float:
                ea, eb = eye[a] * s, eye[b] * s
                plus = value(u + ea + eb) + value(u - ea - eb)
                minus = value(u + ea - eb) + value(u - ea + eb)
                return (plus - minus) / (4 * h * h * s * s)

            second[a, b] = second[b, a] = (4 * mixed(1.0) - mixed(2.0)) / 3.0
    gamma = _induced_christoffel(patch, u, h)
    h_inv = np.linalg.inv(induced_metric(patch, u))
    return float(np.einsum("ab,ab->", h_inv, second - np.einsum("cab,c->ab", gamma, grad)))


def restricted_laplacian(patch: ImmersedPatch, field: ScalarField, u,
                         step: float | None = None) -> LaplacianSample:
    """
    Laplacian of u = f o phi, directly and through the identity

        Delta u = sum_i Hess f(e_i, e_i) - k g(H, grad f)

    over an orthonormal frame e_i of the patch.
    """
    u = np.asarray(u, dtype=float)
    step = get_settings().laplacian_step if step is None else step
    data = second_fundamental_form(patch, u)
    jet = field.jet(data.point)
    direct = laplace_beltrami(patch, _restricted_values(patch, field, jet), u, jet.value, step)
    frame = data.frame()
    trace = sum(
        second_derivative(field, data.point, frame[:, i], guess=None)[0] for i in range(patch.k)
    )
    identity = float(trace - patch.k * (data.H @ jet.differential))
    return LaplacianSample(u=u, value=jet.value, direct=direct, identity=identity, jet=jet,
                           extrinsic=data)


def finite_difference_gradient(field: ComparisonField, p: np.ndarray,
                         step: float) -> np.ndarray:
    """grad f from central differences of f in chart coordinates."""
    n = field.chart.dim
    df = np.zeros(n)
    for i in range(n):
        e = np.zeros(n)
        e[i] = step
        df[i] = (field.value(p + e) - field.value(p - e)) / (2 * step)
    return np.linalg.solve(field.chart.metric(p), df)


def _causal_position(field: ComparisonField, jet: FieldJet) -> str:
    """'future' or 'past' when p is causally related to q along the distinguished geodesic."""
    chart = field.chart
    if jet.shooting is None or jet.energy is None:
        return "none"
    v = jet.shooting.v
    if jet.energy > get_settings().causal_tol * max(1.0, float(v @ v)):
        return "none"
    return "future" if chart.inner(field.q, v, chart.future_vector()) < 0 else "past"


@dataclass
class _PointAudit:
    sample: LaplacianSample
    trapped: TrappedClass
    energy: float
    lam: float
    he: float
    he_ok: bool
    gradient_residual: float
    position: str
    in_quarter_bound: bool
    in_full_bound: bool

    @property
    def margin(self) -> float:
        return self.sample.direct - self.sample.extrinsic.k * self.lam


def _audit_point(patch: ImmersedPatch, field: ComparisonField, u: np.ndarray) -> _PointAudit:
    settings = get_settings()
    sample = restricted_laplacian(patch, field, u)
    jet = sample.jet
    energy = jet.energy or 0.0
    if jet.shooting is not None:
        grad_e = 2.0 * jet.shooting.end_velocity
    else:
        grad_e = np.zeros(patch.chart.dim)
    H = sample.extrinsic.H
    he = float(H @ field.chart.metric(jet.point) @ grad_e)
    he_ok = he <= HE_TOL * (1.0 + float(np.linalg.norm(grad_e)))
    residual = 0.0
    if jet.shooting is not None:
        fd = finite_difference_gradient(field, jet.point, settings.laplacian_step * 1e-2)
        residual = float(np.max(np.abs(fd - jet.gradient)) / (1.0 + np.max(np.abs(jet.gradient))))
    return _PointAudit(
        sample=sample,
        trapped=classify_trapped(sample.extrinsic),
        energy=energy,
        lam=lambda_value(field.K, energy),
        he=he,
        he_ok=he_ok,
        gradient_residual=residual,
        position=_causal_position(field, jet),
        in_quarter_bound=energy_bound_slack(field.K, energy, "quarter") > 0,
        in_full_bound=energy_bound_slack(field.K, energy, "full") > 0,
    )


def _hypotheses(points: list[_PointAudit], mode: AuditMode) -> list[str]:
    reasons: list[str] = []
    zero = {"marginally", "zero_H"}
    if mode == "minimal":
        if any(p.trapped not in zero for p in points):
            reasons.append("mean curvature does not vanish")
    else:
        if any(not p.in_quarter_bound for p in points):
            reasons.append("E_q leaves the pi^2/4K bound")
        if any(p.trapped not in zero | {"weakly_future_trapped"} for p in points):
            reasons.append("not weakly future-trapped")
        if any(p.trapped == "weakly_future_trapped" and not p.he_ok for p in points):
            reasons.append("H E_q > 0")
    if min(p.lam for p in points) <= LAMBDA_FLOOR:
        reasons.append("lambda = 1 - K u is not positive")
    return reasons


def audit_obstruction(
    patch: ImmersedPatch,
    field: ComparisonField,
    mode: AuditMode = "trapped",
    grid_n: int = 5,
    tol: float | None = None,
    check_id: str | None = None,
) -> CheckReport:
    """
    Audit the obstruction to spacelike patches with vanishing or trapped mean curvature.

    Over the patch grid this checks the hypotheses, then requires
    Delta u >= k (1 - K u) with 1 - K u bounded away from zero. Status is
    hypothesis_failed when a hypothesis does not hold, pass (OBSTRUCTED) when the
    inequality holds everywhere, fail otherwise.
    """
    tol = get_settings().convexity_tol if tol is None else tol
    check_id = check_id or f"audit:{patch.name}:{mode}:K={field.K:g}"
    base = dict(
        check_id=check_id, kind="submanifold-audit", chart=patch.chart.name, K=field.K,
        q=field.q.tolist(), tol=tol,
    )
    try:
        points = [_audit_point(patch, field, u) for u in patch.grid(grid_n)]
    except SpacelikeViolation as e:
        return CheckReport(
            **base, status="hypothesis_failed", verdict="HYPOTHESIS_FAILED",
            reasons=["patch is not spacelike"], message=str(e),
        )

    reasons = _hypotheses(points, mode)
    margins = [p.margin for p in points]
    worst = points[int(np.argmin(margins))]
    future_consistent = all(
        p.he_ok for p in points if p.position == "future" and p.trapped == "weakly_future_trapped"
    )
    past_forces_zero = all(
        p.trapped in ("marginally", "zero_H")
        for p in points if p.position == "past" and p.he_ok
    )
    details = {
        "mode": mode,
        "patch": patch.name,
        "k": patch.k,
        "classes": sorted({p.trapped for p in points}),
        "min_lambda": min(p.lam for p in points),
        "max_he": max(p.he for p in points),
        "laplacian_identity_residual": max(p.sample.residual for p in points),
        "gradient_residual": max(p.gradient_residual for p in points),
        "causal_future_consistent": future_consistent,
        "causal_past_forces_zero_H": past_forces_zero,
        "in_quarter_bound": [p.in_quarter_bound for p in points],
        "in_full_bound": [p.in_full_bound for p in points],
    }
    rows = [
        list(map(float, p.sample.u)) + [p.energy, p.sample.value, p.sample.direct,
                                        p.sample.identity, p.lam, p.he, p.margin]
        for p in points
    ]
    series = {"grid": Series(
        columns=[f"u{a}" for a in range(patch.k)]
        + ["E", "u", "lap_direct", "lap_identity", "lambda", "HE", "margin"],
        rows=rows,
    )}
    if reasons:
        status, verdict = "hypothesis_failed", "HYPOTHESIS_FAILED"
    elif min(margins) >= -tol:
        status, verdict = "pass", "OBSTRUCTED"
    else:
        status, verdict = "fail", "NOT-OBSTRUCTED"
    logger.info("submanifold_audited", patch=patch.name, mode=mode, verdict=verdict,
                min_margin=min(margins))
    return CheckReport(
        **base,
        n_samples=len(points),
        min_margin=min(margins),
        max_margin=max(margins),
        worst_sample=SampleRecord(
            point=worst.sample.extrinsic.point.tolist(),
            margin=worst.margin,
            energy=worst.energy,
            values={"lap_direct": worst.sample.direct, "lambda": worst.lam, "HE": worst.he},
        ),
        status=status,
        verdict=verdict,
        reasons=reasons,
        details=details,
        series=series,
    )


def compact_maximum_check(
    patch: ImmersedPatch,
    field: ComparisonField,
    grid_n: int = 16,
    tol: float | None = None,
) -> CheckReport:
    """
    Maximum-principle surrogate on a closed patch: Delta u <= 0 at the maximum of u.

    A patch that passes the full trapped checklist yet has Delta u > tol at its
    maximum is reported as a CONTRADICTION.
    """
    if not patch.is_compact:
        raise ValueError(f"{patch.name} is not closed")
    tol = get_settings().convexity_tol if tol is None else tol
    grid = patch.grid(grid_n)
    values = [field.value(patch.point(u)) for u in grid]
    start = grid[int(np.argmax(values))]
    refined = optimize.minimize(
        lambda u: -field.value(patch.point(u)), start, method="Nelder-Mead",
        options={"xatol": 1e-8, "fatol": 1e-12},
    )
    u_max = refined.x if -refined.fun >= max(values) else start
    sample = restricted_laplacian(patch, field, u_max)
    checklist = audit_obstruction(patch, field, "trapped", grid_n=min(grid_n, 5), tol=tol)
    at_max_ok = sample.direct <= tol
    if at_max_ok:
        status, verdict = "pass", "CONSISTENT"
    elif checklist.passed:
        status, verdict = "fail", "CONTRADICTION"
    else:
        status, verdict = "fail", "MAXIMUM-VIOLATION"
    return CheckReport(
        check_id=f"compact-max:{patch.name}:K={field.K:g}",
        kind="compact-maximum",
        chart=patch.chart.name,
        K=field.K,
        q=field.q.tolist(),
        n_samples=len(grid),
        tol=tol,
        min_margin=-sample.direct,
        status=status,
        verdict=verdict,
        worst_sample=SampleRecord(
            point=sample.extrinsic.point.tolist(), margin=-sample.direct,
            values={"u": sample.value, "lap_direct": sample.direct},
        ),
        details={"u_max_param": u_max.tolist(), "checklist": checklist.verdict,
                 "checklist_reasons": checklist.reasons},
    )
