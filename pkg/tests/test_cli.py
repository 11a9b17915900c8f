"""Tests for the command-line surface."""

import json

from semiriem_lab.cli import main
from semiriem_lab.evaluation import EXIT_CONFIG, EXIT_FAILED, EXIT_OK


def test_catalog_lists_builtins(capsys):
    assert main(["catalog"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "minkowski:3" in out
    assert "desitter:3" in out


def test_catalog_with_user_charts(tmp_path, capsys):
    config = tmp_path / "run.json"
    config.write_text(json.dumps({"user_charts": [{
        "id": "grw:slow-exp",
        "interval": [None, None],
        "warping": {"family": "exp", "rate": 0.5},
        "base_point": [0.0, 1.0, 0.0],
    }]}))
    assert main(["catalog", "--config", str(config)]) == EXIT_OK
    assert "grw:slow-exp" in capsys.readouterr().out


def test_run_config_file(tmp_path):
    config = tmp_path / "run.json"
    config.write_text(json.dumps({
        "chart": "desitter:3",
        "checks": [{"kind": "bound", "K": 1.0, "method": "grw", "direction": "lower"}],
    }))
    out = tmp_path / "out"
    assert main(["run", str(config), "--output-dir", str(out), "--metrics"]) == EXIT_OK
    assert (out / "manifest.json").exists()
    assert (out / "metrics.prom").exists()


def test_invalid_config_exit_code(tmp_path):
    config = tmp_path / "run.json"
    config.write_text('{"checks": [{"kind": "volume"}]}')
    assert main(["run", str(config), "-o", str(tmp_path)]) == EXIT_CONFIG


def test_unknown_chart_exit_code(tmp_path):
    assert main(["check-bound", "--chart", "nowhere:9", "-o", str(tmp_path)]) == EXIT_CONFIG


def test_check_bound_failure(tmp_path):
    code = main(["check-bound", "-c", "minkowski:3", "-K", "1", "-n", "40", "-o", str(tmp_path)])
    assert code == EXIT_FAILED
    report = json.loads((tmp_path / "01-bound.json").read_text())
    assert report["status"] == "fail"


def test_audit_submanifold(tmp_path):
    code = main([
        "audit-submanifold", "-c", "minkowski:3", "--patch", "geodesic-segment",
        "--p", "0.2", "0.1", "0", "--v", "1", "0", "0", "--q", "0", "0", "0",
        "--radius", "2", "-o", str(tmp_path),
    ])
    assert code == EXIT_OK
    report = json.loads((tmp_path / "01-submanifold-audit.json").read_text())
    assert report["verdict"] == "OBSTRUCTED"


def test_convexity_quadratic(tmp_path):
    code = main([
        "check-convexity", "-c", "minkowski:3", "--spacetime", "--field", "minkowski-quadratic",
        "--lambda0", "0.5", "-n", "10", "-o", str(tmp_path),
    ])
    assert code == EXIT_OK
