"""Curvature bounds by plane sampling and by the GRW warping criterion."""

from semiriem_lab.curvature_bounds.bounds import (
    BoundQuery,
    Direction,
    bisect_bound,
    certify_bound,
    plane_margin,
)
from semiriem_lab.curvature_bounds.grw import cross_validate_grw, grw_admissible
from semiriem_lab.curvature_bounds.sampling import PlaneSample, sample_planes

__all__ = [
    "BoundQuery",
    "Direction",
    "PlaneSample",
    "bisect_bound",
    "certify_bound",
    "cross_validate_grw",
    "grw_admissible",
    "plane_margin",
    "sample_planes",
]
