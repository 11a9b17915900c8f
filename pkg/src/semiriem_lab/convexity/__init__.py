"""Comparison functions, Hessians, convexity certification and shape-operator tracks."""

from semiriem_lab.convexity.certify import (
    PointSample,
    box_sampler,
    certify_lambda_convex,
    certify_spacetime_convex,
    comparison_spacetime_region,
    gi_warped_candidate,
    star_sampler,
)
from semiriem_lab.convexity.comparison import (
    ComparisonField,
    ExplicitField,
    FieldJet,
    ScalarField,
    energy_bound,
    energy_bound_slack,
    f_closed,
    f_derivative,
    f_prime,
    f_series,
    f_value,
    lambda_value,
    lorentzian_window,
    minkowski_quadratic,
    positive_quadratic,
    warped_lift,
)
from semiriem_lab.convexity.hessian import (
    HessianSample,
    coordinate_hessian,
    hessian_matrix,
    hessian_quadratic_form,
    second_derivative,
)
from semiriem_lab.convexity.shape import ShapeOperatorTrack, shape_operator_track, track_report

__all__ = [
    "ComparisonField",
    "ExplicitField",
    "FieldJet",
    "HessianSample",
    "PointSample",
    "ScalarField",
    "ShapeOperatorTrack",
    "box_sampler",
    "certify_lambda_convex",
    "certify_spacetime_convex",
    "comparison_spacetime_region",
    "coordinate_hessian",
    "energy_bound",
    "energy_bound_slack",
    "f_closed",
    "f_derivative",
    "f_prime",
    "f_series",
    "f_value",
    "gi_warped_candidate",
    "hessian_matrix",
    "hessian_quadratic_form",
    "lambda_value",
    "lorentzian_window",
    "minkowski_quadratic",
    "positive_quadratic",
    "second_derivative",
    "shape_operator_track",
    "star_sampler",
    "track_report",
    "warped_lift",
]
