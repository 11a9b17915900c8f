"""Metric charts, curvature, and the chart catalog."""

from semiriem_lab.manifolds.catalog import (
    BUILTIN_IDS,
    CatalogEntry,
    ChartCatalog,
    get_catalog,
    list_catalog,
)
from semiriem_lab.manifolds.chart import (
    MetricChart,
    PlaneSection,
    TangentVector,
    christoffel,
    christoffel_derivatives,
    christoffel_with_derivatives,
    finite_difference_christoffel,
    gram_q,
    metric_eval,
)
from semiriem_lab.manifolds.curvature import (
    causal_character,
    curvature_numerator,
    curvature_operator,
    curvature_vector,
    riemann_tensor,
    sectional_curvature,
)
from semiriem_lab.manifolds.profiles import Profile, build_profile
from semiriem_lab.manifolds.warped import WarpedProductSpec, minkowski_chart

__all__ = [
    "BUILTIN_IDS",
    "CatalogEntry",
    "ChartCatalog",
    "MetricChart",
    "PlaneSection",
    "Profile",
    "TangentVector",
    "WarpedProductSpec",
    "build_profile",
    "causal_character",
    "christoffel",
    "christoffel_derivatives",
    "christoffel_with_derivatives",
    "curvature_numerator",
    "curvature_operator",
    "curvature_vector",
    "finite_difference_christoffel",
    "get_catalog",
    "gram_q",
    "list_catalog",
    "metric_eval",
    "minkowski_chart",
    "riemann_tensor",
    "sectional_curvature",
]
