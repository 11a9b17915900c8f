"""Spacelike immersed patches, their extrinsic geometry and the obstruction audits."""

from semiriem_lab.submanifolds.audit import (
    AuditMode,
    LaplacianSample,
    audit_obstruction,
    compact_maximum_check,
    restricted_laplacian,
)
from semiriem_lab.submanifolds.extrinsic import (
    ExtrinsicData,
    TrappedClass,
    classify_trapped,
    induced_metric,
    mean_curvature,
    second_fundamental_form,
)
from semiriem_lab.submanifolds.patch import (
    ImmersedPatch,
    closed_geodesic,
    geodesic_segment,
    graph_patch,
    hyperboloid,
    round_sphere,
    slice_patch,
)

__all__ = [
    "AuditMode",
    "ExtrinsicData",
    "ImmersedPatch",
    "LaplacianSample",
    "TrappedClass",
    "audit_obstruction",
    "classify_trapped",
    "closed_geodesic",
    "compact_maximum_check",
    "geodesic_segment",
    "graph_patch",
    "hyperboloid",
    "induced_metric",
    "mean_curvature",
    "restricted_laplacian",
    "round_sphere",
    "second_fundamental_form",
    "slice_patch",
]
