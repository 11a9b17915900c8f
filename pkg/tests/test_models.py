"""Tests for the run configuration schema and report serialization."""

import json

import pytest

from semiriem_lab.errors import ConfigInvalid
from semiriem_lab.evaluation import write_report
from semiriem_lab.models import (
    BoundReport,
    CheckReport,
    PlaneWitness,
    RunConfig,
    Series,
    load_run_config,
    parse_run_config,
    read_report,
    to_json,
)

USER_CHART = {
    "id": "grw:cosh2",
    "interval": [None, None],
    "warping": {"family": "cosh", "rate": 2.0},
    "fiber_curvature": -1.0,
    "base_point": [0.0, 1.0, 0.0],
}


class TestRunConfig:
    def test_defaults(self):
        config = parse_run_config("{}")
        assert config.chart == "minkowski:3"
        assert config.checks == []
        assert config.settings_updates() == {}

    def test_chart_ids_in_first_use_order(self):
        config = RunConfig.model_validate({
            "chart": "desitter:3",
            "checks": [{"kind": "bound", "chart": "minkowski:3"}, {"kind": "bound"},
                       {"kind": "triangles", "chart": "desitter:3"}],
        })
        assert config.chart_ids() == ["desitter:3", "minkowski:3"]

    @pytest.mark.parametrize(
        "text, path",
        [
            ('{"checks": [{"kind": "volume"}]}', "run.json:checks.0.kind"),
            ('{"checks": [{"kind": "bound", "colour": 1}]}', "run.json:checks.0.colour"),
            ('{"checks": [{"kind": "bound", "n_samples": 0}]}', "run.json:checks.0.n_samples"),
            ('{"seed": "abc"}', "run.json:seed"),
        ],
    )
    def test_error_paths(self, text, path):
        with pytest.raises(ConfigInvalid) as info:
            parse_run_config(text, "run.json")
        assert info.value.path == path

    def test_audit_needs_patch(self):
        with pytest.raises(ConfigInvalid) as info:
            parse_run_config('{"checks": [{"kind": "submanifold-audit"}]}')
        assert "needs a patch" in info.value.message

    def test_geodesic_patch_needs_data(self):
        text = json.dumps({"checks": [{"kind": "submanifold-audit",
                                       "patch": {"family": "geodesic-segment"}}]})
        with pytest.raises(ConfigInvalid):
            parse_run_config(text)

    def test_user_chart_prefix(self):
        with pytest.raises(ConfigInvalid) as info:
            parse_run_config(json.dumps({"user_charts": [{**USER_CHART, "id": "cosh2"}]}))
        assert info.value.path == "<config>:user_charts.0.id"

    def test_user_chart_base_point(self):
        chart = {**USER_CHART, "base_point": [0.0, 1.0]}
        with pytest.raises(ConfigInvalid):
            parse_run_config(json.dumps({"user_charts": [chart]}))

    def test_user_chart_bounds(self):
        config = parse_run_config(json.dumps({"user_charts": [USER_CHART]}))
        assert config.user_charts[0].bounds() == (float("-inf"), float("inf"))

    def test_settings_updates(self):
        config = parse_run_config('{"geodesic": {"tol": 1e-11, "method": "DOP853"}, '
                                  '"shooting": {"max_iter": 12}}')
        assert config.settings_updates() == {
            "geodesic_tol": 1e-11, "geodesic_method": "DOP853", "shooting_max_iter": 12,
        }

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigInvalid):
            load_run_config(tmp_path / "absent.json")


class TestReports:
    def test_serialization_is_deterministic(self):
        report = CheckReport(check_id="x", kind="bound", chart="minkowski:3", status="pass",
                             details={"b": 1, "a": 2})
        text = to_json(report)
        assert text == to_json(report.model_copy())
        assert text.endswith("\n")
        assert text.index('"a"') < text.index('"b"')

    def test_series_are_not_dumped(self):
        report = CheckReport(check_id="x", kind="bound", chart="minkowski:3", status="pass",
                             series={"s": Series(columns=["a"], rows=[[1.0]])})
        assert "series" not in json.loads(to_json(report))

    def test_bound_report_round_trip(self, tmp_path):
        witness = PlaneWitness(point=[0.0, 0.0, 0.0], v=[1.0, 0.0, 0.0], w=[0.0, 0.0, 1.0],
                               q=-1.0, numerator=0.0, sectional=0.0, margin=-1.0,
                               plane_class="timelike")
        report = BoundReport(check_id="b", kind="bound", chart="minkowski:3", K=1.0,
                             status="fail", witness=witness, direction="upper",
                             series={"margins": Series(columns=["i", "m"], rows=[[0.0, -1.0]])})
        paths = write_report(tmp_path, 3, report)
        assert [p.name for p in paths] == ["03-bound.json", "03-bound-margins.csv"]
        loaded = read_report(paths[0])
        assert isinstance(loaded, BoundReport)
        assert loaded.witness == witness
        assert paths[1].read_text().splitlines()[0] == "i,m"

    def test_unknown_fields_are_rejected(self, tmp_path):
        path = tmp_path / "r.json"
        path.write_text(json.dumps({"check_id": "x", "kind": "bound", "chart": "c",
                                    "status": "pass", "extra": 1}))
        with pytest.raises(ValueError):
            read_report(path)
