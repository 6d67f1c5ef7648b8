"""
Report module for verification runs.

Writes JSON reports (manifest, per-checker summary, violation records) and
optional CSV exports of violations, and reloads them for comparison or replay.
"""

import csv
import json
import logging
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Optional

from symineq import __version__
from symineq import spectral  # noqa: F401  registers the matrix checkers used by replay
from symineq.config import REPORT_DIR
from symineq.verify import InequalityReport, SuiteSummary, replay

logger = logging.getLogger(__name__)

VOLATILE_KEYS = ("timestamp",)


def outcome_label(violations: int) -> str:
    return "ALL_PASS" if violations == 0 else f"VIOLATIONS({violations})"


def build_manifest(command: str, config: dict, outcome: str) -> dict:
    """Header of every report; only the timestamp differs between identical runs."""
    return {
        "command": command,
        "config": config,
        "artifact_version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "outcome": outcome,
    }


def build_report(command: str, config: dict, summary: SuiteSummary) -> dict:
    return {
        "manifest": build_manifest(command, config, outcome_label(summary.violation_count)),
        "summary": summary.to_dict(),
        "violations": [v.to_dict() for v in summary.violations],
    }


def default_report_path(label: str, output_dir: Optional[Path] = None) -> Path:
    output_dir = output_dir or REPORT_DIR
    timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
    return output_dir / f"{label}_{timestamp}.json"


def save_report(data: dict, label: str, output_path: Optional[Path] = None, output_dir: Optional[Path] = None) -> Path:
    """
    Save a report to a JSON file.

    Args:
        data: Report data
        label: Label for the default file name
        output_path: Explicit destination (overrides output_dir)
        output_dir: Output directory (defaults to REPORT_DIR)

    Returns:
        Path to the saved file
    """
    filename = Path(output_path) if output_path else default_report_path(label, output_dir)
    filename.parent.mkdir(parents=True, exist_ok=True)

    # json writes floats with repr, which round-trips every double exactly
    with open(filename, "w", encoding="utf-8", newline="\n") as f:
        json.dump(data, f, indent=2)
        f.write("\n")

    logger.info(f"Report saved: {filename}")
    return filename


def load_report(filepath: Path) -> dict:
    """Load a report from a JSON file."""
    with open(filepath, encoding="utf-8") as f:
        return json.load(f)


def _flatten(prefix: str, value: Any, out: dict) -> None:
    if isinstance(value, list):
        for i, item in enumerate(value):
            _flatten(f"{prefix}_{i}", item, out)
    else:
        out[prefix] = value


def violation_row(report: InequalityReport) -> dict:
    """One CSV row: the report fields followed by the inputs flattened as x_0, X_1_2, ..."""
    row = {
        "checker_id": report.checker_id,
        "trial_index": report.trial_index,
        "lhs": report.lhs,
        "rhs": report.rhs,
        "margin": report.margin,
        "passed": report.passed,
        "tolerance": report.tolerance,
    }
    for key, value in report.inputs.items():
        _flatten(key, value, row)
    return row


def save_csv(violations: list[InequalityReport], path: Path) -> Path:
    """Write one row per violation; columns are the union over all rows."""
    rows = [violation_row(v) for v in violations]
    fields: list[str] = list(violation_row(InequalityReport("", {}, 0.0, 0.0, 0.0, True, 0.0)))
    for row in rows:
        fields.extend(k for k in row if k not in fields)

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=fields, restval="", lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)

    logger.info(f"CSV saved: {path} ({len(rows)} rows)")
    return path


def compare_reports(old: dict, new: dict) -> list[str]:
    """
    Compare two reports, ignoring run timestamps.

    Returns:
        List of dotted paths whose values differ (empty when identical)
    """
    diffs: list[str] = []
    _diff("", old, new, diffs)
    return diffs


def _diff(path: str, old: Any, new: Any, diffs: list[str]) -> None:
    if isinstance(old, dict) and isinstance(new, dict):
        for key in sorted(set(old) | set(new)):
            if key in VOLATILE_KEYS:
                continue
            sub = f"{path}.{key}" if path else key
            if key not in old or key not in new:
                diffs.append(sub)
            else:
                _diff(sub, old[key], new[key], diffs)
    elif isinstance(old, list) and isinstance(new, list):
        if len(old) != len(new):
            diffs.append(f"{path}[len]")
            return
        for i, (a, b) in enumerate(zip(old, new)):
            _diff(f"{path}[{i}]", a, b, diffs)
    elif old != new:
        diffs.append(path)


def replay_violations(data: dict) -> list[tuple[InequalityReport, InequalityReport]]:
    """Re-evaluate every recorded violation from its inputs alone."""
    pairs = []
    for record in data.get("violations", []):
        recorded = InequalityReport.from_dict(record)
        pairs.append((recorded, replay(recorded)))
    return pairs
