"""Signed triangle comparison against constant-curvature model surfaces."""

from semiriem_lab.triangles.compare import (
    MIDPOINT_PAIRS,
    GeodesicTriangle,
    Pair,
    build_triangle,
    compare_triangle,
    compare_triangles,
    falsify_bound,
    random_pairs,
    sample_triangles,
)
from semiriem_lab.triangles.model import (
    ModelTriangle,
    Signature,
    energy_from_chord,
    energy_of_length,
    model_energy,
    model_form,
    realize_model_triangle,
    signed_length,
)

__all__ = [
    "MIDPOINT_PAIRS",
    "GeodesicTriangle",
    "ModelTriangle",
    "Pair",
    "Signature",
    "build_triangle",
    "compare_triangle",
    "compare_triangles",
    "energy_from_chord",
    "energy_of_length",
    "falsify_bound",
    "model_energy",
    "model_form",
    "random_pairs",
    "realize_model_triangle",
    "sample_triangles",
    "signed_length",
]
