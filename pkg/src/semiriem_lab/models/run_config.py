"""Run configuration schema for batch verification runs."""

import math
from pathlib import Path
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from semiriem_lab.errors import ConfigInvalid

CheckKind = Literal[
    "bound",
    "convexity",
    "spacetime-convexity",
    "shape-track",
    "triangles",
    "submanifold-audit",
    "identities",
]


class WarpingSpec(BaseModel):
    """A warping function f from a named family."""

    model_config = ConfigDict(extra="forbid")

    family: Literal["cosh", "sinh", "sin", "cos", "exp", "const", "polynomial"]
    amplitude: float = 1.0
    rate: float = 1.0
    shift: float = 0.0
    coefficients: list[float] = Field(default_factory=lambda: [1.0])


class UserChartSpec(BaseModel):
    """A user GRW chart -I x_f F registered as "grw:<name>"."""

    model_config = ConfigDict(extra="forbid")

    id: str
    interval: tuple[float | None, float | None]  # None is an infinite end
    warping: WarpingSpec
    fiber_dim: int = Field(default=2, ge=1, le=3)
    fiber_curvature: float = 0.0
    base_point: list[float]
    star_radius: float = Field(default=0.5, gt=0)
    constant_curvature: float | None = None

    @field_validator("id")
    @classmethod
    def _grw_prefix(cls, v: str) -> str:
        if not v.startswith("grw:"):
            raise ValueError("user chart ids must start with 'grw:'")
        return v

    @model_validator(mode="after")
    def _base_point_dim(self) -> "UserChartSpec":
        if len(self.base_point) != self.fiber_dim + 1:
            raise ValueError(f"base_point needs {self.fiber_dim + 1} coordinates")
        return self

    def bounds(self) -> tuple[float, float]:
        a, b = self.interval
        return (-math.inf if a is None else a, math.inf if b is None else b)


class PatchSpec(BaseModel):
    """An immersed patch from one of the built-in families."""

    model_config = ConfigDict(extra="forbid")

    family: Literal[
        "slice", "round-sphere", "hyperboloid", "graph", "geodesic-segment", "closed-geodesic"
    ]
    t0: float = 0.0
    radius: float = 1.0
    center: list[float] | None = None
    sign: Literal[1, -1] = 1
    offset: float = 0.0
    coefficients: list[float] = Field(default_factory=lambda: [0.0])
    box: list[tuple[float, float]] | None = None
    p: list[float] | None = None
    v: list[float] | None = None
    length: float = 1.0
    period: float = 2 * math.pi

    @model_validator(mode="after")
    def _geodesic_data(self) -> "PatchSpec":
        needs_data = self.family in ("geodesic-segment", "closed-geodesic")
        if needs_data and (self.p is None or self.v is None):
            raise ValueError(f"{self.family} needs p and v")
        return self


class CheckSpec(BaseModel):
    """One check of a run. Unset chart, q and radius fall back to the run and catalog defaults."""

    model_config = ConfigDict(extra="forbid")

    kind: CheckKind
    chart: str | None = None
    K: float = 0.0
    q: list[float] | None = None
    radius: float | None = Field(default=None, gt=0)
    n_samples: int = Field(default=100, ge=1)
    seed: int | None = None
    tol: float | None = Field(default=None, gt=0)
    direction: Literal["upper", "lower"] = "upper"
    method: Literal["sampling", "grw", "cross-validate"] = "sampling"
    field: Literal["comparison", "warped-lift", "minkowski-quadratic"] = "comparison"
    lambda0: float = 1.0
    interval: tuple[float, float] | None = None
    n_times: int = Field(default=8, ge=2)
    n_pairs: int = Field(default=5, ge=1)
    patch: PatchSpec | None = None
    mode: Literal["minimal", "trapped", "compact-maximum"] = "trapped"
    grid_n: int = Field(default=5, ge=1)
    full: bool = False

    @model_validator(mode="after")
    def _patch_for_audit(self) -> "CheckSpec":
        if self.kind == "submanifold-audit" and self.patch is None:
            raise ValueError("submanifold-audit needs a patch")
        return self


class GeodesicOptions(BaseModel):
    model_config = ConfigDict(extra="forbid")

    tol: float | None = Field(default=None, gt=0)
    method: Literal["RK45", "DOP853", "Radau"] | None = None


class ShootingOptions(BaseModel):
    model_config = ConfigDict(extra="forbid")

    max_iter: int | None = Field(default=None, ge=1)


class RunConfig(BaseModel):
    """A batch run: charts, checks in declaration order, master seed and output directory."""

    model_config = ConfigDict(extra="forbid")

    chart: str = "minkowski:3"
    user_charts: list[UserChartSpec] = Field(default_factory=list)
    checks: list[CheckSpec] = Field(default_factory=list)
    seed: int = 0
    output_dir: Path | None = None
    geodesic: GeodesicOptions = Field(default_factory=GeodesicOptions)
    shooting: ShootingOptions = Field(default_factory=ShootingOptions)

    def chart_ids(self) -> list[str]:
        """Every chart id the checks reference, in first-use order."""
        ids = [self.chart] + [c.chart for c in self.checks if c.chart is not None]
        return list(dict.fromkeys(ids))

    def settings_updates(self) -> dict:
        updates: dict = {}
        if self.geodesic.tol is not None:
            updates["geodesic_tol"] = self.geodesic.tol
        if self.geodesic.method is not None:
            updates["geodesic_method"] = self.geodesic.method
        if self.shooting.max_iter is not None:
            updates["shooting_max_iter"] = self.shooting.max_iter
        return updates


def _error_path(error: dict) -> str:
    return ".".join(str(part) for part in error["loc"]) or "<root>"


def parse_run_config(text: str, source: str = "<config>") -> RunConfig:
    """
    Parse a JSON run configuration.

    Raises:
        ConfigInvalid: With the dotted path of the first offending key
    """
    try:
        return RunConfig.model_validate_json(text)
    except ValidationError as e:
        first = e.errors()[0]
        raise ConfigInvalid(f"{source}:{_error_path(first)}", first["msg"]) from e


def load_run_config(path: Path) -> RunConfig:
    """Read and validate a run configuration file."""
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise ConfigInvalid(str(path), f"cannot read config: {e}") from e
    return parse_run_config(text, str(path))
