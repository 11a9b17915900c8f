"""Configuration management using pydantic-settings."""

from collections.abc import Iterator
from contextlib import contextmanager
from contextvars import ContextVar
from functools import lru_cache
from pathlib import Path

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Numerical tolerances and paths, loaded from SEMIRIEM_* environment variables."""

    model_config = SettingsConfigDict(
        env_prefix="SEMIRIEM_",
        env_file=".env",
        env_file_encoding="utf-8",
    )

    # Output
    output_dir: Path = Path("results")

    # Geodesics
    geodesic_tol: float = Field(default=1e-10, gt=0)
    geodesic_method: str = "RK45"

    # Shooting
    shooting_max_iter: int = Field(default=30, ge=1)
    shooting_tol: float = Field(default=1e-11, gt=0)
    shooting_cond_max: float = 1e10
    homotopy_steps: int = Field(default=8, ge=1)

    # Curvature
    plane_tol: float = 1e-6
    causal_tol: float = 1e-9
    fd_scale: float = 1.0

    # Convexity
    hessian_step: float = Field(default=1e-2, gt=0)
    convexity_tol: float = 1e-5

    # Bounds
    bound_tol: float = 1e-6
    grw_grid_n: int = Field(default=200, ge=2)
    grw_window: float = 3.0
    grw_margin: float = 1e-3
    sampler_max_rejection: float = 0.99

    # Triangles
    triangle_tol: float = 1e-5
    degeneracy_tol: float = 1e-9

    # Submanifolds
    laplacian_step: float = Field(default=1e-2, gt=0)
    identity_tol: float = 1e-4

    # Logging
    log_level: str = "INFO"


_override: ContextVar[Settings | None] = ContextVar("settings_override", default=None)


@lru_cache
def _base_settings() -> Settings:
    return Settings()


def get_settings() -> Settings:
    """Get the active settings instance (cached, or the innermost override)."""
    override = _override.get()
    if override is not None:
        return override
    return _base_settings()


@contextmanager
def settings_override(**updates) -> Iterator[Settings]:
    """Temporarily replace selected settings, e.g. tolerances coming from a run config."""
    settings = get_settings().model_copy(update=updates)
    token = _override.set(settings)
    try:
        yield settings
    finally:
        _override.reset(token)
