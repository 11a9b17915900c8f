"""Tests for settings loading and overrides."""

from pathlib import Path

from semiriem_lab.config import Settings, get_settings, settings_override


def test_defaults():
    settings = Settings()
    assert settings.geodesic_method == "RK45"
    assert settings.triangle_tol == 1e-5
    assert settings.identity_tol == 1e-4
    assert settings.output_dir == Path("results")


def test_environment_prefix(monkeypatch):
    monkeypatch.setenv("SEMIRIEM_GEODESIC_TOL", "1e-8")
    monkeypatch.setenv("SEMIRIEM_OUTPUT_DIR", "/tmp/semiriem-out")
    settings = Settings()
    assert settings.geodesic_tol == 1e-8
    assert settings.output_dir == Path("/tmp/semiriem-out")
    assert "output_dir" in settings.model_fields_set


def test_override_is_scoped():
    before = get_settings().shooting_max_iter
    with settings_override(shooting_max_iter=3) as settings:
        assert settings.shooting_max_iter == 3
        assert get_settings().shooting_max_iter == 3
        with settings_override(geodesic_tol=1e-6):
            assert get_settings().shooting_max_iter == 3
            assert get_settings().geodesic_tol == 1e-6
    assert get_settings().shooting_max_iter == before
