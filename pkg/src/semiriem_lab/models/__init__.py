"""Models package."""

from semiriem_lab.models.reports import (
    SCHEMA_VERSION,
    BoundReport,
    CheckOutcome,
    CheckReport,
    ClassStats,
    PlaneWitness,
    RunManifest,
    SampleRecord,
    Series,
    read_report,
    to_json,
)
from semiriem_lab.models.run_config import (
    CheckKind,
    CheckSpec,
    PatchSpec,
    RunConfig,
    UserChartSpec,
    WarpingSpec,
    load_run_config,
    parse_run_config,
)

__all__ = [
    "SCHEMA_VERSION",
    "BoundReport",
    "CheckKind",
    "CheckOutcome",
    "CheckReport",
    "CheckSpec",
    "ClassStats",
    "PatchSpec",
    "PlaneWitness",
    "RunConfig",
    "RunManifest",
    "SampleRecord",
    "Series",
    "UserChartSpec",
    "WarpingSpec",
    "load_run_config",
    "parse_run_config",
    "read_report",
    "to_json",
]
