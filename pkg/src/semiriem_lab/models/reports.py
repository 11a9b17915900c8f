"""Check reports, plane witnesses and the run manifest."""

import json
from pathlib import Path
from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field

SCHEMA_VERSION = 1

Status = Literal["pass", "fail", "error", "hypothesis_failed"]


class Series(BaseModel):
    """A plot series written as a comma-separated table."""

    model_config = ConfigDict(extra="forbid")

    columns: list[str]
    rows: list[list[float]] = Field(default_factory=list)


class SampleRecord(BaseModel):
    """One evaluated sample, used for the worst offender of a check."""

    model_config = ConfigDict(extra="forbid")

    point: list[float]
    direction: list[float] | None = None
    margin: float
    g_vv: float | None = None
    energy: float | None = None
    values: dict[str, float] = Field(default_factory=dict)


class PlaneWitness(BaseModel):
    """The plane attaining the worst curvature-bound margin."""

    model_config = ConfigDict(extra="forbid")

    point: list[float]
    v: list[float]
    w: list[float]
    q: float  # g(v,v)g(w,w) - g(v,w)^2
    numerator: float  # g(R(v,w)v, w)
    sectional: float
    margin: float
    plane_class: Literal["spacelike", "timelike", "riemannian"]


class ClassStats(BaseModel):
    """Margin statistics for one causal class of planes."""

    model_config = ConfigDict(extra="forbid")

    count: int = 0
    min_margin: float | None = None
    max_margin: float | None = None
    mean_margin: float | None = None

    @classmethod
    def from_margins(cls, margins: list[float]) -> "ClassStats":
        if not margins:
            return cls()
        return cls(
            count=len(margins),
            min_margin=min(margins),
            max_margin=max(margins),
            mean_margin=sum(margins) / len(margins),
        )


class CheckReport(BaseModel):
    """
    Result of one verifier run.

    `status` is the machine verdict used for exit codes. `verdict` carries a
    check-specific label such as OBSTRUCTED, REFUTED, INCONCLUSIVE or AGREE.
    """

    model_config = ConfigDict(extra="forbid")

    schema_version: Literal[1] = SCHEMA_VERSION
    check_id: str
    kind: str
    chart: str
    K: float | None = None
    q: list[float] | None = None
    n_samples: int = 0
    tol: float = 0.0
    min_margin: float | None = None
    max_margin: float | None = None
    worst_sample: SampleRecord | None = None
    status: Status
    verdict: str | None = None
    message: str | None = None
    reasons: list[str] = Field(default_factory=list)
    details: dict[str, Any] = Field(default_factory=dict)
    series: dict[str, Series] = Field(default_factory=dict, exclude=True)

    @property
    def passed(self) -> bool:
        return self.status == "pass"


class BoundReport(CheckReport):
    """Curvature-bound report with the plane witness and per-class statistics."""

    direction: Literal["upper", "lower"] = "upper"
    witness: PlaneWitness | None = None
    per_class: dict[str, ClassStats] = Field(default_factory=dict)


class CheckOutcome(BaseModel):
    """Manifest line for one executed check."""

    model_config = ConfigDict(extra="forbid")

    index: int
    kind: str
    chart: str
    status: Status
    verdict: str | None = None
    report_file: str
    wall_time_s: float


class RunManifest(BaseModel):
    """Summary of a run: config hash, version, outcomes, and files written."""

    model_config = ConfigDict(extra="forbid")

    schema_version: Literal[1] = SCHEMA_VERSION
    config_hash: str
    version: str
    outcomes: list[CheckOutcome] = Field(default_factory=list)
    files: list[str] = Field(default_factory=list)
    exit_code: int = 0


def to_json(model: BaseModel) -> str:
    """Deterministic serialization: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(model.model_dump(mode="json"), sort_keys=True, indent=2) + "\n"


def read_report(path: Path) -> CheckReport:
    """Load a report file; unknown fields are rejected."""
    data = json.loads(Path(path).read_text())
    if data.get("kind") in ("bound", "grw-bound"):
        return BoundReport.model_validate(data)
    return CheckReport.model_validate(data)
