"""Tests for the batch runner and the identity suite."""

import json

import pytest

from semiriem_lab.config import settings_override
from semiriem_lab.errors import ConfigInvalid
from semiriem_lab.evaluation import (
    EXIT_FAILED,
    EXIT_NUMERIC,
    EXIT_OK,
    config_hash,
    derive_seed,
    exit_code_for,
    resolve_output_dir,
    run,
    verify_identities,
)
from semiriem_lab.evaluation.runner import MANIFEST_NAME, METRICS_NAME
from semiriem_lab.manifolds import get_catalog
from semiriem_lab.models import CheckOutcome, RunConfig, read_report


def _outcome(status: str) -> CheckOutcome:
    return CheckOutcome(index=1, kind="bound", chart="c", status=status, report_file="x",
                        wall_time_s=0.0)


class TestSeeds:
    def test_derived_seeds_are_stable(self):
        assert derive_seed(0, 1) == derive_seed(0, 1)
        assert derive_seed(0, 1) != derive_seed(0, 2)
        assert 0 <= derive_seed(7, 3) < 2**63

    def test_config_hash_ignores_key_order(self):
        a = RunConfig.model_validate({"seed": 1, "chart": "desitter:3"})
        b = RunConfig.model_validate({"chart": "desitter:3", "seed": 1})
        assert config_hash(a) == config_hash(b)


class TestExitCodes:
    @pytest.mark.parametrize(
        "statuses, code",
        [
            (["pass", "hypothesis_failed"], EXIT_OK),
            (["pass", "error"], EXIT_NUMERIC),
            (["error", "fail"], EXIT_FAILED),
            ([], EXIT_OK),
        ],
    )
    def test_precedence(self, statuses, code):
        assert exit_code_for([_outcome(s) for s in statuses]) == code


class TestOutputDir:
    def test_flag_wins(self, tmp_path):
        config = RunConfig(output_dir=tmp_path / "config")
        assert resolve_output_dir(config, tmp_path / "flag") == tmp_path / "flag"
        assert resolve_output_dir(config) == tmp_path / "config"

    def test_environment_beats_config(self, tmp_path):
        config = RunConfig(output_dir=tmp_path / "config")
        with settings_override(output_dir=tmp_path / "env"):
            assert resolve_output_dir(config) == tmp_path / "env"


class TestRun:
    def test_reports_and_manifest(self, tmp_path):
        config = RunConfig.model_validate({
            "chart": "desitter:3",
            "seed": 3,
            "checks": [
                {"kind": "bound", "K": 1.0, "method": "grw"},
                {"kind": "bound", "chart": "minkowski:3", "K": 1.0, "n_samples": 40},
            ],
        })
        manifest = run(config, tmp_path, metrics=True)
        assert [o.status for o in manifest.outcomes] == ["pass", "fail"]
        assert manifest.exit_code == EXIT_FAILED
        assert (tmp_path / MANIFEST_NAME).exists()
        assert METRICS_NAME in manifest.files
        assert "semiriem_checks_total" in (tmp_path / METRICS_NAME).read_text()
        report = read_report(tmp_path / manifest.outcomes[1].report_file)
        assert report.witness is not None
        saved = json.loads((tmp_path / MANIFEST_NAME).read_text())
        assert saved["config_hash"] == config_hash(config)

    def test_non_grw_chart_fails_hypothesis(self, tmp_path):
        config = RunConfig.model_validate({
            "checks": [{"kind": "bound", "chart": "minkowski:3", "method": "grw"}],
        })
        manifest = run(config, tmp_path)
        assert manifest.outcomes[0].status == "hypothesis_failed"
        assert manifest.exit_code == EXIT_OK

    def test_unknown_chart_before_any_check(self, tmp_path):
        config = RunConfig.model_validate({"checks": [{"kind": "bound", "chart": "nowhere:3"}]})
        with pytest.raises(ConfigInvalid) as info:
            run(config, tmp_path)
        assert info.value.path == "checks.0.chart"
        assert not (tmp_path / MANIFEST_NAME).exists()

    def test_user_chart_is_usable(self, tmp_path):
        config = RunConfig.model_validate({
            "chart": "grw:desitter-again",
            "user_charts": [{
                "id": "grw:desitter-again",
                "interval": [None, None],
                "warping": {"family": "cosh"},
                "fiber_curvature": 1.0,
                "base_point": [0.0, 1.5, 0.0],
                "constant_curvature": 1.0,
            }],
            "checks": [{"kind": "bound", "K": 1.0, "method": "grw"}],
        })
        manifest = run(config, tmp_path)
        assert manifest.outcomes[0].chart == "grw:desitter-again"
        assert manifest.exit_code == EXIT_OK
        assert "grw:desitter-again" in get_catalog()


class TestIdentities:
    def test_subset(self):
        report = verify_identities(only=["series-consistency", "calibration"])
        names = [item["name"] for item in report.details["identities"]]
        assert names == ["calibration", "series-consistency"]
        assert report.verdict == "ALL-HOLD"

    @pytest.mark.slow
    def test_reduced_suite_holds(self):
        report = verify_identities(seed=0)
        assert report.status == "pass", report.reasons
