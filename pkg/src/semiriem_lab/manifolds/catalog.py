"""Catalog of named charts with validated base points and star-region radii."""

import math
import re
from dataclasses import dataclass
from typing import Literal

import numpy as np
import structlog

from semiriem_lab.errors import UnknownChart
from semiriem_lab.manifolds.chart import MetricChart
from semiriem_lab.manifolds.profiles import const_profile, cosh_profile, sin_profile
from semiriem_lab.manifolds.warped import (
    WarpedProductSpec,
    lorentzian_model_spec,
    minkowski_chart,
    riemannian_model_chart,
)

logger = structlog.get_logger()

INF = float("inf")
MODEL_SURFACE_RE = re.compile(r"^model-surface:K=([-+0-9.eE]+),index=([01])$")


@dataclass(frozen=True, eq=False)
class CatalogEntry:
    """A chart together with the data the verifiers need to use it."""

    chart_id: str
    chart: MetricChart
    base_point: np.ndarray
    star_radius: float
    constant_curvature: float | None = None
    warped: WarpedProductSpec | None = None
    notes: str = ""
    provenance: Literal["builtin", "user"] = "builtin"

    @property
    def dim(self) -> int:
        return self.chart.dim

    @property
    def index(self) -> int:
        return self.chart.index


def _polar_base_point(fiber_dim: int, tau: float, r: float = 1.0) -> np.ndarray:
    if fiber_dim == 1:
        return np.array([tau, 0.0])
    if fiber_dim == 2:
        return np.array([tau, r, 0.0])
    return np.array([tau, r, math.pi / 2, 0.0])


def _warped_entry(
    chart_id: str,
    spec: WarpedProductSpec,
    base_point: np.ndarray,
    star_radius: float,
    constant_curvature: float | None,
    notes: str,
    provenance: Literal["builtin", "user"] = "builtin",
) -> CatalogEntry:
    return CatalogEntry(
        chart_id=chart_id,
        chart=spec.to_chart(name=chart_id),
        base_point=base_point,
        star_radius=star_radius,
        constant_curvature=constant_curvature,
        warped=spec,
        notes=notes,
        provenance=provenance,
    )


def _build_builtin(chart_id: str) -> CatalogEntry | None:
    family, _, arg = chart_id.partition(":")
    if family == "minkowski" and arg in {"2", "3", "4"}:
        dim = int(arg)
        return CatalogEntry(
            chart_id=chart_id,
            chart=minkowski_chart(dim),
            base_point=np.zeros(dim),
            star_radius=2.0,
            constant_curvature=0.0,
            notes="R<=K and R>=K exactly for K=0",
        )
    if family == "desitter" and arg in {"2", "3", "4"}:
        fiber_dim = int(arg) - 1
        spec = WarpedProductSpec((-INF, INF), cosh_profile(), fiber_dim, 1.0, name=chart_id)
        return _warped_entry(
            chart_id, spec, _polar_base_point(fiber_dim, 0.0, math.pi / 2), 0.6, 1.0,
            "constant curvature 1; admissible K=1 both directions",
        )
    if family == "antidesitter-sin" and arg in {"2", "3", "4"}:
        fiber_dim = int(arg) - 1
        spec = WarpedProductSpec((0.0, math.pi), sin_profile(), fiber_dim, -1.0, name=chart_id)
        return _warped_entry(
            chart_id, spec, _polar_base_point(fiber_dim, math.pi / 2), 0.5, -1.0,
            "constant curvature -1; admissible K=-1 both directions",
        )
    if chart_id == "grw-cosh-hyperbolic:3":
        spec = WarpedProductSpec((-INF, INF), cosh_profile(), 2, -1.0, name=chart_id)
        return _warped_entry(
            chart_id, spec, _polar_base_point(2, 0.0), 0.6, None,
            "R<=1 (strict on fiber planes); R>=1 fails",
        )
    if chart_id == "grw:static-hyperbolic":
        spec = WarpedProductSpec((-INF, INF), const_profile(), 2, -1.0, name=chart_id)
        return _warped_entry(
            chart_id, spec, _polar_base_point(2, 0.0), 0.6, None,
            "static product f=1; R<=-1 holds, no lower bound",
        )
    if chart_id == "grw:minkowski-polar":
        spec = WarpedProductSpec((-INF, INF), const_profile(), 2, 0.0, name=chart_id)
        return _warped_entry(
            chart_id, spec, _polar_base_point(2, 0.0), 0.6, 0.0,
            "Minkowski space as a GRW with flat polar fiber",
        )
    if chart_id == "grw:gi-sin-hyperbolic":
        spec = WarpedProductSpec((0.0, math.pi / 2), sin_profile(), 2, -1.0, name=chart_id)
        return _warped_entry(
            chart_id, spec, _polar_base_point(2, math.pi / 4), 0.4, -1.0,
            "(0,pi/2) x_sin H^2 inside anti-de Sitter space",
        )
    match = MODEL_SURFACE_RE.match(chart_id)
    if match:
        curvature = float(match.group(1))
        if match.group(2) == "1":
            spec = lorentzian_model_spec(curvature)
            return _warped_entry(
                chart_id, spec, np.array([0.0, 0.0]), 0.5, curvature,
                "Lorentzian model surface",
            )
        r0 = min(1.0, math.pi / (2.0 * math.sqrt(curvature))) if curvature > 0 else 1.0
        return CatalogEntry(
            chart_id=chart_id,
            chart=riemannian_model_chart(curvature),
            base_point=np.array([r0, 0.0]),
            star_radius=0.4,
            constant_curvature=curvature,
            notes="Riemannian model surface",
        )
    return None


BUILTIN_IDS = [
    "minkowski:2",
    "minkowski:3",
    "minkowski:4",
    "desitter:2",
    "desitter:3",
    "desitter:4",
    "antidesitter-sin:2",
    "antidesitter-sin:3",
    "antidesitter-sin:4",
    "grw-cosh-hyperbolic:3",
    "grw:static-hyperbolic",
    "grw:minkowski-polar",
    "grw:gi-sin-hyperbolic",
    "model-surface:K=1,index=0",
    "model-surface:K=1,index=1",
    "model-surface:K=0,index=0",
    "model-surface:K=0,index=1",
    "model-surface:K=-1,index=0",
    "model-surface:K=-1,index=1",
]


class ChartCatalog:
    """
    Registry of built-in and user-defined charts.

    Built-in entries are constructed lazily; user GRW specs are registered from the
    run configuration and listed with "user" provenance.
    """

    def __init__(self):
        self._entries: dict[str, CatalogEntry] = {}
        self._user_ids: list[str] = []

    def get(self, chart_id: str) -> CatalogEntry:
        """
        Look up a chart entry by id.

        Raises:
            UnknownChart: If the id is neither built in nor registered
        """
        if chart_id in self._entries:
            return self._entries[chart_id]
        entry = _build_builtin(chart_id)
        if entry is None:
            raise UnknownChart(chart_id)
        self._entries[chart_id] = entry
        return entry

    def __contains__(self, chart_id: str) -> bool:
        try:
            self.get(chart_id)
        except UnknownChart:
            return False
        return True

    def register_warped(
        self,
        chart_id: str,
        spec: WarpedProductSpec,
        base_point: np.ndarray,
        star_radius: float,
        constant_curvature: float | None = None,
    ) -> CatalogEntry:
        """Register a user GRW chart under a "grw:<id>" name."""
        if not chart_id.startswith("grw:"):
            raise ValueError("user chart ids must start with 'grw:'")
        entry = _warped_entry(
            chart_id, spec, np.asarray(base_point, dtype=float), star_radius,
            constant_curvature, "user GRW spec", provenance="user",
        )
        if chart_id not in self._user_ids:
            self._user_ids.append(chart_id)
        self._entries[chart_id] = entry
        logger.info("user_chart_registered", chart_id=chart_id, dim=entry.dim)
        return entry

    def clear_user(self):
        """Drop all user registrations."""
        for chart_id in self._user_ids:
            self._entries.pop(chart_id, None)
        self._user_ids.clear()

    def entries(self) -> list[CatalogEntry]:
        """Built-in entries followed by user entries, in registration order."""
        return [self.get(cid) for cid in BUILTIN_IDS] + [self.get(cid) for cid in self._user_ids]


# Singleton instance
_catalog: ChartCatalog | None = None


def get_catalog() -> ChartCatalog:
    """Get the singleton chart catalog."""
    global _catalog
    if _catalog is None:
        _catalog = ChartCatalog()
    return _catalog


def list_catalog() -> str:
    """Text table of every entry: id, dim, index, star radius, curvature, provenance, notes."""
    lines = [f"{'chart':<28} {'dim':>3} {'index':>5} {'radius':>6} {'K':>5}  {'source':<8} notes"]
    for entry in get_catalog().entries():
        k = "-" if entry.constant_curvature is None else f"{entry.constant_curvature:g}"
        lines.append(
            f"{entry.chart_id:<28} {entry.dim:>3} {entry.index:>5} {entry.star_radius:>6g} {k:>5}  "
            f"{entry.provenance:<8} {entry.notes}"
        )
    return "\n".join(lines)
