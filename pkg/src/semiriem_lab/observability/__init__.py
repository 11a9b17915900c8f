"""Observability package."""

from semiriem_lab.observability.metrics import (
    CHECK_LATENCY,
    CHECKS_RUN,
    GEODESIC_INTEGRATIONS,
    SHOOTING_FAILURES,
    SHOOTING_ITERATIONS,
    get_metrics,
)

__all__ = [
    "CHECKS_RUN",
    "CHECK_LATENCY",
    "GEODESIC_INTEGRATIONS",
    "SHOOTING_ITERATIONS",
    "SHOOTING_FAILURES",
    "get_metrics",
]
