from prometheus_client import Counter, Histogram, generate_latest

# Check Metrics
CHECKS_RUN = Counter(
    "semiriem_checks_total",
    "Total number of checks executed",
    ["kind", "status"]
)

CHECK_LATENCY = Histogram(
    "semiriem_check_seconds",
    "Wall time of a single check in seconds",
    ["kind"],
    buckets=[0.1, 0.5, 1.0, 5.0, 10.0, 30.0, 60.0, 300.0]
)

# Geodesic Metrics
GEODESIC_INTEGRATIONS = Counter(
    "semiriem_geodesic_integrations_total",
    "Total number of geodesic ODE integrations",
    ["kind"]
)

SHOOTING_ITERATIONS = Histogram(
    "semiriem_shooting_iterations",
    "Newton iterations per inverse exponential map solve",
    buckets=[1, 2, 3, 5, 8, 13, 21, 34]
)

SHOOTING_FAILURES = Counter(
    "semiriem_shooting_failures_total",
    "Inverse exponential map solves that failed",
    ["reason"]
)


def get_metrics() -> bytes:
    """Return latest metrics in the Prometheus text format."""
    return generate_latest()
