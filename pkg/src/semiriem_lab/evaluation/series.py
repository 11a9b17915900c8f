"""Plot series and report files on disk."""

from pathlib import Path

import numpy as np

from semiriem_lab.models.reports import CheckReport, Series, to_json


def write_series(path: Path, series: Series) -> Path:
    """Write a series as comma-separated values with a header row."""
    rows = np.asarray(series.rows, dtype=float).reshape(-1, len(series.columns))
    np.savetxt(path, rows, delimiter=",", header=",".join(series.columns), comments="", fmt="%.12g")
    return path


def write_report(output_dir: Path, index: int, report: CheckReport) -> list[Path]:
    """
    Write <NN>-<kind>.json and one <NN>-<kind>-<series>.csv per series.

    Returns:
        Written paths, report first
    """
    output_dir.mkdir(parents=True, exist_ok=True)
    stem = f"{index:02d}-{report.kind}"
    report_path = output_dir / f"{stem}.json"
    report_path.write_text(to_json(report))
    written = [report_path]
    for name, series in sorted(report.series.items()):
        written.append(write_series(output_dir / f"{stem}-{name}.csv", series))
    return written
