"""Induced metric, second fundamental form and mean curvature of spacelike patches."""

from dataclasses import dataclass
from typing import Literal

import numpy as np

from semiriem_lab.config import get_settings
from semiriem_lab.errors import SpacelikeViolation
from semiriem_lab.manifolds.chart import TangentVector, christoffel
from semiriem_lab.manifolds.curvature import causal_character
from semiriem_lab.submanifolds.patch import ImmersedPatch

SPACELIKE_MIN_EIG = 1e-8

TrappedClass = Literal[
    "weakly_future_trapped",
    "weakly_past_trapped",
    "marginally",
    "untrapped_spacelike_H",
    "zero_H",
]


@dataclass(frozen=True, eq=False)
class ExtrinsicData:
    """
    Extrinsic geometry at one parameter point.

    II[a, b] is the normal vector II(d_a phi, d_b phi), with the relativity sign
    nabla-bar_X Y = nabla_X Y - II(X, Y).
    """

    patch: ImmersedPatch
    u: np.ndarray
    point: np.ndarray
    tangent: np.ndarray
    induced_metric: np.ndarray
    II: np.ndarray
    H: np.ndarray
    christoffel_induced: np.ndarray
    tangential_residual: float

    @property
    def k(self) -> int:
        return self.patch.k

    def frame(self) -> np.ndarray:
        """Columns are an orthonormal frame of the tangent space in chart components."""
        return self.tangent @ orthonormal_coefficients(self.induced_metric)


def orthonormal_coefficients(h: np.ndarray) -> np.ndarray:
    """C with C^T h C = I, from the Cholesky factor of h."""
    return np.linalg.inv(np.linalg.cholesky(h)).T


def induced_metric(patch: ImmersedPatch, u) -> np.ndarray:
    """
    Pullback of the chart metric by d phi.

    Raises:
        OutOfDomain: If phi(u) leaves the chart
        SpacelikeViolation: If the pullback is not positive definite
    """
    x = patch.point(u)
    P = patch.tangent(u)
    h = P.T @ patch.chart.metric(x) @ P
    h = 0.5 * (h + h.T)
    min_eig = float(np.linalg.eigvalsh(h)[0])
    if min_eig <= SPACELIKE_MIN_EIG:
        raise SpacelikeViolation(
            f"{patch.name}: induced metric at u={np.asarray(u).tolist()} "
            f"has eigenvalue {min_eig:.3g}"
        )
    return h


def second_fundamental_form(patch: ImmersedPatch, u) -> ExtrinsicData:
    """II(X, Y) = -(normal part of nabla-bar_X Y), with H = trace_h(II) / k."""
    u = np.asarray(u, dtype=float)
    chart = patch.chart
    x = patch.point(u)
    P = patch.tangent(u)
    A = patch.second_partials(u)
    g = chart.metric(x)
    h = induced_metric(patch, u)
    h_inv = np.linalg.inv(h)

    gamma = christoffel(chart, x)
    ambient = A + np.einsum("mij,ia,jb->mab", gamma, P, P)
    # tangential coefficients of nabla-bar_a d_b are the induced Christoffel symbols
    coeffs = np.einsum("cd,md,mn,nab->cab", h_inv, P, g, ambient)
    normal = ambient - np.einsum("mc,cab->mab", P, coeffs)
    II = -np.moveaxis(normal, 0, -1)
    H = np.einsum("ab,abm->m", h_inv, II) / patch.k

    # g(II, d_c phi) should vanish
    leak = np.einsum("abm,mn,nc->abc", II, g, P)
    scale = 1.0 + float(np.max(np.abs(ambient)))
    return ExtrinsicData(
        patch=patch,
        u=u,
        point=x,
        tangent=P,
        induced_metric=h,
        II=II,
        H=H,
        christoffel_induced=coeffs,
        tangential_residual=float(np.max(np.abs(leak))) / scale,
    )


def mean_curvature(
    patch: ImmersedPatch, u, frame_coefficients: np.ndarray | None = None
) -> np.ndarray:
    """
    H = (1/k) sum_i II(E_i, E_i) for an orthonormal frame E_i = d phi C e_i.

    frame_coefficients defaults to the Cholesky frame; any C with C^T h C = I gives
    the same H.
    """
    data = second_fundamental_form(patch, u)
    C = frame_coefficients
    if C is None:
        C = orthonormal_coefficients(data.induced_metric)
    total = np.einsum("ai,bi,abm->m", C, C, data.II)
    return total / patch.k


def classify_trapped(data: ExtrinsicData, zero_tol: float | None = None) -> TrappedClass:
    """
    Trapped class of a point from the causal character and time orientation of H.

    H = 0 is "marginally" in codimension 2 and "zero_H" otherwise; a nonzero causal H
    is future- or past-trapped by the sign of g(H, d_t).
    """
    chart = data.patch.chart
    if not chart.is_lorentzian:
        raise ValueError(f"chart {chart.name} is not Lorentzian")
    settings = get_settings()
    zero_tol = settings.identity_tol if zero_tol is None else zero_tol
    if float(np.max(np.abs(data.H))) <= zero_tol:
        return "marginally" if data.patch.codimension == 2 else "zero_H"
    scale = float(data.H @ data.H)
    character = causal_character(
        TangentVector(chart, data.point, data.H), tol=settings.causal_tol * max(1.0, scale)
    )
    if character == "spacelike":
        return "untrapped_spacelike_H"
    future = chart.inner(data.point, data.H, chart.future_vector()) < 0
    return "weakly_future_trapped" if future else "weakly_past_trapped"
