"""Geodesic integration, exponential map, Newton shooting and Jacobi fields."""

from semiriem_lab.geodesics.integrator import GeodesicArc, exp_map, integrate_geodesic
from semiriem_lab.geodesics.jacobi import (
    JacobiField,
    integrate_variational,
    jacobi_transport,
    parallel_frame,
)
from semiriem_lab.geodesics.region import StarRegion
from semiriem_lab.geodesics.shooting import (
    ShootingResult,
    energy_gradient,
    first_order_guess,
    inverse_exp,
    shoot,
    signed_energy,
)

__all__ = [
    "GeodesicArc",
    "JacobiField",
    "ShootingResult",
    "StarRegion",
    "energy_gradient",
    "exp_map",
    "first_order_guess",
    "integrate_geodesic",
    "integrate_variational",
    "inverse_exp",
    "jacobi_transport",
    "parallel_frame",
    "shoot",
    "signed_energy",
]
