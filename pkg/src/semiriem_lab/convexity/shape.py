"""Modified shape operator S = nabla grad f_{K,q} along radial geodesics."""

from dataclasses import dataclass

import numpy as np
import structlog

from semiriem_lab.config import get_settings
from semiriem_lab.convexity.comparison import ComparisonField, f_derivative, f_value
from semiriem_lab.convexity.hessian import hessian_matrix
from semiriem_lab.errors import ConjugatePoint, SingularJacobian
from semiriem_lab.geodesics import GeodesicArc, integrate_geodesic, parallel_frame
from semiriem_lab.manifolds.curvature import curvature_operator, riemann_tensor
from semiriem_lab.models.reports import CheckReport, SampleRecord, Series

logger = structlog.get_logger()


@dataclass(frozen=True, eq=False)
class ShapeOperatorTrack:
    """
    S(t) and the model (1 - K f~(t)) Id along a unit-speed geodesic from q.

    Attributes:
        arc: The radial geodesic
        times: Sample times
        S: (T, n, n) operator components, S = g^-1 Hess f
        S_model: (T, n, n) model operator with f~ = f(K, sg t^2)
        min_eig_diff: Smallest eigenvalue of Hess f - (1 - K f~) g per time
        self_adjoint_residual: max |g S - (g S)^T| per time
        riccati_residual: Relative Riccati identity residual per time
    """

    arc: GeodesicArc
    times: np.ndarray
    S: np.ndarray
    S_model: np.ndarray
    min_eig_diff: np.ndarray
    self_adjoint_residual: np.ndarray
    riccati_residual: np.ndarray

    @property
    def min_margin(self) -> float:
        return float(np.min(self.min_eig_diff))


def _riccati_residuals(field: ComparisonField, arc: GeodesicArc, times: np.ndarray,
                       ops: np.ndarray, sg: float) -> np.ndarray:
    """
    Residual of (nabla_N S)X - R(N,X)N - nabla_X(S N) + S^2 X with N = grad f.

    nabla_N S is taken in a parallel frame with np.gradient over the sample times, so the
    residual is a consistency diagnostic rather than a certificate.
    """
    chart, K = field.chart, field.K
    frames = parallel_frame(arc, times)
    in_frame = np.stack([np.linalg.solve(P, S @ P) for P, S in zip(frames, ops)])
    d_in_frame = np.gradient(in_frame, times, axis=0, edge_order=2)
    out = np.zeros(times.size)
    for s, t in enumerate(times):
        x, xdot = arc.state(t)
        energy = sg * t * t
        fe = f_derivative(K, energy, 1)
        fee = f_derivative(K, energy, 2)
        feee = f_derivative(K, energy, 3)
        grad_e = 2.0 * t * xdot
        n_vec = fe * grad_e
        S = ops[s]
        g = chart.metric(x)
        dpsi = 4.0 * fe * fe + 8.0 * energy * fe * fee
        ddpsi = 16.0 * fe * fee + 8.0 * energy * fee * fee + 8.0 * energy * fe * feee
        s_energy = (S - fee * np.outer(grad_e, g @ grad_e)) / fe
        nabla_sn = 0.5 * ddpsi * np.outer(grad_e, g @ grad_e) + 0.5 * dpsi * s_energy
        P = frames[s]
        nabla_n_s = 2.0 * t * fe * (P @ d_in_frame[s] @ np.linalg.inv(P))
        riemann = riemann_tensor(chart, x)
        curv = np.stack(
            [curvature_operator(riemann, e, n_vec, n_vec) for e in np.eye(chart.dim)], axis=1
        )
        rho = nabla_n_s - curv - nabla_sn + S @ S
        out[s] = float(np.linalg.norm(rho) / (1.0 + np.linalg.norm(S) ** 2))
    return out


def shape_operator_track(
    field: ComparisonField,
    direction,
    t_max: float,
    n_times: int = 8,
    riccati: bool = True,
) -> ShapeOperatorTrack:
    """
    Track S along the geodesic t -> exp_q(t u) for the unit direction u.

    Raises:
        ConjugatePoint: If d exp_q degenerates along the arc
        ValueError: If the direction is null
    """
    chart, q, K = field.chart, field.q, field.K
    u = np.asarray(direction, dtype=float)
    guu = chart.inner(q, u, u)
    if abs(guu) <= get_settings().causal_tol:
        raise ValueError("shape tracks need a non-null direction")
    u = u / np.sqrt(abs(guu))
    sg = float(np.sign(guu))
    arc = integrate_geodesic(chart, q, u, t_max)
    times = np.linspace(t_max / n_times, t_max, n_times)

    ops, models, diffs, asym = [], [], [], []
    for t in times:
        x = arc.position(t)
        try:
            hess = hessian_matrix(field, x, guess=t * u)
        except SingularJacobian as e:
            raise ConjugatePoint(f"conjugate point before t={t:.4g}: {e}") from e
        g = chart.metric(x)
        S = np.linalg.solve(g, hess)
        lam = 1.0 - K * f_value(K, sg * t * t)
        ops.append(S)
        models.append(lam * np.eye(chart.dim))
        diffs.append(float(np.min(np.linalg.eigvalsh(hess - lam * g))))
        gs = g @ S
        asym.append(float(np.max(np.abs(gs - gs.T))))

    ops_arr = np.stack(ops)
    residual = (
        _riccati_residuals(field, arc, times, ops_arr, sg) if riccati else np.zeros(times.size)
    )
    return ShapeOperatorTrack(
        arc=arc,
        times=times,
        S=ops_arr,
        S_model=np.stack(models),
        min_eig_diff=np.array(diffs),
        self_adjoint_residual=np.array(asym),
        riccati_residual=residual,
    )


def track_report(
    field: ComparisonField,
    tracks: list[ShapeOperatorTrack],
    tol: float | None = None,
    check_id: str = "shape-track",
) -> CheckReport:
    """Aggregate tracks into a report: PASS iff every min_eig_diff is >= -tol."""
    tol = get_settings().convexity_tol if tol is None else tol
    rows: list[list[float]] = []
    worst: SampleRecord | None = None
    for index, track in enumerate(tracks):
        for t, diff, res in zip(track.times, track.min_eig_diff, track.riccati_residual):
            rows.append([float(index), float(t), float(diff), float(res)])
            if worst is None or diff < worst.margin:
                worst = SampleRecord(
                    point=track.arc.position(t).tolist(),
                    direction=track.arc.v0.tolist(),
                    margin=float(diff),
                    values={"t": float(t), "riccati_residual": float(res)},
                )
    margins = [r[2] for r in rows]
    min_margin = min(margins) if margins else None
    status = "pass" if min_margin is not None and min_margin >= -tol else "fail"
    logger.info("shape_tracks_checked", chart=field.chart.name, tracks=len(tracks), status=status)
    return CheckReport(
        check_id=check_id,
        kind="shape-track",
        chart=field.chart.name,
        K=field.K,
        q=field.q.tolist(),
        n_samples=len(rows),
        tol=tol,
        min_margin=min_margin,
        max_margin=max(margins) if margins else None,
        worst_sample=worst,
        status=status,
        details={
            "tracks": len(tracks),
            "max_riccati_residual": max((r[3] for r in rows), default=0.0),
            "max_self_adjoint_residual": max(
                (float(np.max(t.self_adjoint_residual)) for t in tracks), default=0.0
            ),
        },
        series={
            "eigs": Series(columns=["track", "t", "min_eig_diff", "riccati_residual"], rows=rows)
        },
    )
