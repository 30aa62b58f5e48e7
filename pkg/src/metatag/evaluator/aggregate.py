"""Score aggregation, the squeeze transform, and the long-format stats export."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .scoring import DocScore

STATS_COLUMNS = [
    "f1",
    "f1_sv",
    "method",
    "strategy",
    "n_examples",
    "ratio",
    "model",
    "model_type",
    "text_length_words",
    "text_length_centered",
    "text_id",
    "run_index",
]


@dataclass(frozen=True)
class GroupSummary:
    key: tuple[str, ...]
    median_f1: float
    iqr: tuple[float, float]
    n_scores: int


def aggregate(scores: list[DocScore], key: tuple[str, ...]) -> GroupSummary:
    """Median and quartiles by linear interpolation (the inclusive method)."""
    if not scores:
        raise ValueError("cannot aggregate an empty group")
    f1s = np.array([s.f1 for s in scores], dtype=float)
    q1, median, q3 = np.percentile(f1s, [25, 50, 75])
    return GroupSummary(key=key, median_f1=float(median), iqr=(float(q1), float(q3)),
                        n_scores=len(scores))


def sv_transform(y: float, n: int) -> float:
    """Squeeze a [0,1] score into (0,1): (y * (n - 1) + 0.5) / n."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if not 0.0 <= y <= 1.0:
        raise ValueError(f"score {y} outside [0, 1]")
    return (y * (n - 1) + 0.5) / n


@dataclass(frozen=True)
class StatsRow:
    """One scored (document, model, variant, repetition) observation."""

    f1: float
    n_tokens: int  # unmasked token count; the transform's sample size
    method: str
    strategy: str
    n_examples: int
    ratio: str
    model: str
    model_type: str
    text_length_words: int
    text_id: str
    run_index: int


def export_stats_table(rows: list[StatsRow]) -> list[dict[str, object]]:
    """Long-format records for external mixed-effects fitting.

    text_length_centered subtracts the mean text length over the exported
    rows, so the column means 0 by construction.
    """
    if not rows:
        return []
    mean_length = sum(r.text_length_words for r in rows) / len(rows)
    exported = []
    for row in rows:
        exported.append({
            "f1": row.f1,
            "f1_sv": sv_transform(row.f1, max(row.n_tokens, 1)),
            "method": row.method,
            "strategy": row.strategy,
            "n_examples": row.n_examples,
            "ratio": row.ratio,
            "model": row.model,
            "model_type": row.model_type,
            "text_length_words": row.text_length_words,
            "text_length_centered": row.text_length_words - mean_length,
            "text_id": row.text_id,
            "run_index": row.run_index,
        })
    return exported


def write_stats_csv(rows: list[StatsRow], path: str | Path) -> Path:
    """RFC-4180 CSV with the exact stats header; a sidecar .meta.json records
    the transform's n policy."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    records = export_stats_table(rows)
    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=STATS_COLUMNS)
        writer.writeheader()
        for record in records:
            writer.writerow({k: _cell(v) for k, v in record.items()})
    meta = {
        "n_rows": len(records),
        "sv_n_policy": "per-row unmasked token count",
        "columns": STATS_COLUMNS,
    }
    path.with_suffix(".meta.json").write_text(
        json.dumps(meta, indent=1, sort_keys=True), encoding="utf-8"
    )
    return path


def _cell(value: object) -> str:
    if isinstance(value, float):
        return format(value, ".12g")
    return str(value)
