"""Aggregate per-run F1 scores into mean/std tables and growth percentages.

Run scores arrive as JSON files {"config": str, "f1_percent": real}; the
config label is a "/"-separated (classifier, strategy, factor) triple used
as the deterministic sort key.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from pathlib import Path

from .errors import ConfigError, SchemaError


def aggregate_runs(scores: list[float]) -> tuple[float, float]:
    """Arithmetic mean and sample (n-1) standard deviation; one run gives std 0."""
    if not scores:
        raise ConfigError("cannot aggregate an empty score list")
    mean = sum(scores) / len(scores)
    if len(scores) == 1:
        return mean, 0.0
    variance = sum((x - mean) ** 2 for x in scores) / (len(scores) - 1)
    return mean, math.sqrt(variance)


def growth(baseline_mean: float, augmented_mean: float) -> float:
    """Relative performance change versus the baseline, in percent."""
    if baseline_mean <= 0:
        raise ConfigError("baseline mean must be positive")
    return 100.0 * (augmented_mean - baseline_mean) / baseline_mean


@dataclass(frozen=True)
class RunReport:
    config: str
    run_scores: tuple[float, ...]
    mean: float
    std: float
    growth_pct: float | None = None

    @classmethod
    def from_scores(
        cls, config: str, scores: list[float], baseline_mean: float | None = None
    ) -> "RunReport":
        mean, std = aggregate_runs(scores)
        growth_pct = None if baseline_mean is None else growth(baseline_mean, mean)
        return cls(config, tuple(scores), mean, std, growth_pct)


def load_run_scores(runs_dir: str | Path) -> list[tuple[str, float]]:
    """Read every *.json score file in the directory, sorted by filename."""
    runs_dir = Path(runs_dir)
    scores: list[tuple[str, float]] = []
    for path in sorted(runs_dir.glob("*.json")):
        try:
            obj = json.loads(path.read_text(encoding="utf-8"))
            config, value = obj["config"], obj["f1_percent"]
        except (json.JSONDecodeError, KeyError, TypeError):
            raise SchemaError(f"{path}: expected {{'config', 'f1_percent'}}") from None
        if not isinstance(config, str) or isinstance(value, bool) or not isinstance(value, (int, float)):
            raise SchemaError(f"{path}: config must be a string and f1_percent a number")
        scores.append((config, float(value)))
    return scores


def build_reports(
    scores: list[tuple[str, float]], baseline: str | None = None
) -> list[RunReport]:
    """Group scores by config and aggregate; growth is relative to the
    baseline config's mean (the baseline row itself gets none)."""
    grouped: dict[str, list[float]] = {}
    for config, value in scores:
        grouped.setdefault(config, []).append(value)
    baseline_mean = None
    if baseline is not None:
        if baseline not in grouped:
            raise ConfigError(f"baseline config {baseline!r} has no runs")
        baseline_mean = aggregate_runs(grouped[baseline])[0]
    reports = []
    for config, values in grouped.items():
        reports.append(
            RunReport.from_scores(
                config, values, None if config == baseline else baseline_mean
            )
        )
    return reports


def _fmt2(value: float) -> str:
    return str(Decimal(repr(value)).quantize(Decimal("0.01"), rounding=ROUND_HALF_UP))


def format_mean_std(mean: float, std: float) -> str:
    return f"{_fmt2(mean)}±{_fmt2(std)}"


def _sort_key(report: RunReport) -> tuple[str, ...]:
    return tuple(report.config.split("/"))


def render_tables(reports: list[RunReport], fmt: str = "markdown") -> str:
    """Render sorted report rows; values rounded half-up to 2 decimals here only."""
    if fmt not in ("markdown", "csv"):
        raise ConfigError(f"unknown table format {fmt!r}")
    ordered = sorted(reports, key=_sort_key)
    rows = []
    for rep in ordered:
        f1 = format_mean_std(rep.mean, rep.std)
        growth_cell = "" if rep.growth_pct is None else _fmt2(rep.growth_pct)
        rows.append((rep.config, f1, growth_cell))
    if fmt == "csv":
        lines = ["config,f1,growth_pct"]
        lines += [",".join(row) for row in rows]
    else:
        lines = ["| config | f1 | growth, % |", "| --- | --- | --- |"]
        lines += [f"| {config} | {f1} | {growth_cell} |" for config, f1, growth_cell in rows]
    return "\n".join(lines) + "\n"
