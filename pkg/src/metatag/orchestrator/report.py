"""Derived views over run records: summaries, box plots, stats CSV,
discrepancy reports, and the failure log.

Reports are pure functions of the records (plus gold corpus), so replaying
an experiment reproduces them byte for byte.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..corpus.model import AnnotatedDocument
from ..corpus.segment import tokenize
from ..evaluator.aggregate import StatsRow, write_stats_csv
from ..evaluator.discrepancy import extract_discrepancies
from ..evaluator.scoring import ConfusionCounts, DocScore, score_tokens
from .config import ExperimentConfig
from .matrix import Cell
from .runner import RunRecord


@dataclass
class ReportBundle:
    reports_dir: Path
    summary: dict
    stats_csv: Path
    discrepancy_paths: list[Path] = field(default_factory=list)

    @property
    def summary_path(self) -> Path:
        return self.reports_dir / "summary.json"


def _five_numbers(values: list[float]) -> dict:
    arr = np.array(values, dtype=float)
    q1, median, q3 = (float(q) for q in np.percentile(arr, [25, 50, 75]))
    iqr = q3 - q1
    lo_fence, hi_fence = q1 - 1.5 * iqr, q3 + 1.5 * iqr
    inside = [v for v in values if lo_fence <= v <= hi_fence]
    return {
        "n": len(values),
        "median": median,
        "q1": q1,
        "q3": q3,
        "whisker_low": min(inside) if inside else q1,
        "whisker_high": max(inside) if inside else q3,
        "outliers": sorted(v for v in values if v < lo_fence or v > hi_fence),
    }


def _pool_counts(records: list[RunRecord]) -> list[float]:
    """One pooled F1 per (cell, repetition), summing token counts over docs."""
    by_run: dict[tuple[str, int], ConfusionCounts] = {}
    for r in records:
        key = (r.cell_key, r.repetition)
        c = by_run.get(key, ConfusionCounts(0, 0, 0))
        by_run[key] = ConfusionCounts(
            c.tp + r.score.counts.tp, c.fp + r.score.counts.fp, c.fn + r.score.counts.fn
        )
    pooled = []
    for key in sorted(by_run):
        c = by_run[key]
        gold = [True] * c.tp + [True] * c.fn + [False] * c.fp
        pred = [True] * c.tp + [False] * c.fn + [True] * c.fp
        pooled.append(score_tokens(gold, pred).f1)
    return pooled


def _group(records: list[RunRecord], key_fn) -> dict[tuple, list[RunRecord]]:
    groups: dict[tuple, list[RunRecord]] = {}
    for r in records:
        groups.setdefault(key_fn(r), []).append(r)
    return groups


def _summaries(groups: dict[tuple, list[RunRecord]], pooled: bool) -> list[dict]:
    out = []
    for key in sorted(groups):
        rs = groups[key]
        f1s = _pool_counts(rs) if pooled else [r.score.f1 for r in rs]
        stats = _five_numbers(f1s)
        out.append({"key": list(key), **stats})
    return out


def generate_report(
    records: list[RunRecord],
    corpus: list[AnnotatedDocument],
    config: ExperimentConfig,
    cells: list[Cell],
    cell_failures: dict[str, str] | None = None,
) -> ReportBundle:
    if not records:
        raise ValueError("nothing to report: no records at all")
    # a run where everything failed still gets a report: the failure log IS
    # the result in that case
    scored = [r for r in records if r.scored]
    reports_dir = config.output_dir / "reports"
    reports_dir.mkdir(parents=True, exist_ok=True)

    by_cell = _summaries(
        _group(scored, lambda r: (r.model, r.method, r.strategy, r.n_examples, r.ratio)),
        config.pooled_scoring,
    )
    by_method = _summaries(
        _group(scored, lambda r: (r.model, r.method)), config.pooled_scoring
    )
    pe_only = [r for r in scored if r.method == "prompt_engineering"]
    by_strategy = _summaries(
        _group(pe_only, lambda r: (r.model, r.strategy)), config.pooled_scoring
    )

    stats_rows = [
        StatsRow(
            f1=r.score.f1,
            n_tokens=r.text_length_words - r.score.excluded_token_count,
            method=r.method,
            strategy=r.strategy,
            n_examples=r.n_examples,
            ratio=r.ratio,
            model=r.model,
            model_type=r.model_type,
            text_length_words=r.text_length_words,
            text_id=r.doc_id,
            run_index=r.repetition,
        )
        for r in sorted(scored, key=lambda r: (r.cell_key, r.repetition, r.doc_id))
    ]
    stats_csv = write_stats_csv(stats_rows, reports_dir / "stats.csv")

    discrepancy_paths = _write_discrepancy_reports(scored, corpus, config, reports_dir)

    record_failures = [
        {
            "cell_key": r.cell_key,
            "repetition": r.repetition,
            "doc_id": r.doc_id,
            "kind": r.failure_kind,
            "detail": r.failure_detail,
            "fidelity": r.fidelity,
        }
        for r in sorted(
            (r for r in records if not r.scored),
            key=lambda r: (r.cell_key, r.repetition, r.doc_id),
        )
    ]
    cell_status = _cell_status(records, cells, config, cell_failures or {})

    summary = {
        "groups_by_cell": by_cell,
        "groups_by_method": by_method,
        "groups_by_strategy": by_strategy,
        "cells": cell_status,
        "failures": {
            "records": record_failures,
            "cells": dict(sorted((cell_failures or {}).items())),
        },
        "n_records": len(records),
        "n_scored": len(scored),
        "pooled_scoring": config.pooled_scoring,
        "stats_csv": "stats.csv",
        "discrepancy_reports": [p.name for p in discrepancy_paths],
    }
    (reports_dir / "summary.json").write_text(
        json.dumps(summary, indent=1, sort_keys=True, ensure_ascii=False) + "\n",
        encoding="utf-8",
    )
    (reports_dir / "summary.txt").write_text(_human_summary(summary), encoding="utf-8")
    return ReportBundle(
        reports_dir=reports_dir,
        summary=summary,
        stats_csv=stats_csv,
        discrepancy_paths=discrepancy_paths,
    )


def _cell_status(
    records: list[RunRecord],
    cells: list[Cell],
    config: ExperimentConfig,
    cell_failures: dict[str, str],
) -> list[dict]:
    by_key: dict[str, list[RunRecord]] = {}
    for r in records:
        by_key.setdefault(r.cell_key, []).append(r)
    status = []
    for cell in sorted(cells, key=lambda c: c.key):
        rs = by_key.get(cell.key, [])
        failed_reps = sorted(
            int(k.rsplit("__rep", 1)[1])
            for k in cell_failures
            if k.rsplit("__rep", 1)[0] == cell.key
        )
        status.append({
            "cell_key": cell.key,
            "n_records": len(rs),
            "n_scored": sum(1 for r in rs if r.scored),
            "failed_repetitions": failed_reps,
            "status": "failed" if (not rs and failed_reps) else "present",
        })
    return status


def _write_discrepancy_reports(
    scored: list[RunRecord],
    corpus: list[AnnotatedDocument],
    config: ExperimentConfig,
    reports_dir: Path,
) -> list[Path]:
    docs_by_id = {d.doc.id: d for d in corpus}
    runs: dict[tuple[str, int], list[RunRecord]] = {}
    for r in scored:
        runs.setdefault((r.cell_key, r.repetition), []).append(r)
    out_dir = reports_dir / "discrepancies"
    out_dir.mkdir(exist_ok=True)
    paths = []
    for (cell_key, repetition) in sorted(runs):
        rs = sorted(runs[(cell_key, repetition)], key=lambda r: r.doc_id)
        run_id = f"{cell_key}__rep{repetition}"
        documents = {}
        discrepancies = []
        for r in rs:
            doc = docs_by_id[r.doc_id]
            tokens = tokenize(doc.doc.text)
            gold = [bool(g) for g in r.gold_labels]
            pred = [bool(p) for p in r.pred_labels]
            mask = [bool(m) for m in r.mask]
            documents[r.doc_id] = {
                "text": doc.doc.text,
                "tokens": [[t.start, t.end] for t in tokens],
                "gold": list(r.gold_labels),
                "pred": list(r.pred_labels),
                "mask": list(r.mask),
            }
            for d in extract_discrepancies(
                gold, pred, tokens, config.context_width, doc.doc.text,
                doc_id=r.doc_id, mask=mask,
            ):
                discrepancies.append({"index": len(discrepancies), **d.to_json()})
        payload = {
            "run_id": run_id,
            "cell_key": cell_key,
            "repetition": repetition,
            "model": rs[0].model,
            "method": rs[0].method,
            "strategy": rs[0].strategy,
            "documents": documents,
            "discrepancies": discrepancies,
        }
        path = out_dir / f"{run_id}.json"
        path.write_text(
            json.dumps(payload, indent=1, sort_keys=True, ensure_ascii=False) + "\n",
            encoding="utf-8",
        )
        paths.append(path)
    return paths


def _human_summary(summary: dict) -> str:
    lines = ["experiment summary", "=" * 60, ""]
    lines.append(f"{'model / method':<42}{'n':>5}{'median':>8}{'IQR':>14}")
    lines.append("-" * 69)
    for group in summary["groups_by_method"]:
        key = " / ".join(str(k) for k in group["key"])
        iqr = f"{group['q1']:.3f}-{group['q3']:.3f}"
        lines.append(f"{key:<42}{group['n']:>5}{group['median']:>8.3f}{iqr:>14}")
    if summary["groups_by_strategy"]:
        lines += ["", f"{'model / strategy':<42}{'n':>5}{'median':>8}{'IQR':>14}", "-" * 69]
        for group in summary["groups_by_strategy"]:
            key = " / ".join(str(k) for k in group["key"])
            iqr = f"{group['q1']:.3f}-{group['q3']:.3f}"
            lines.append(f"{key:<42}{group['n']:>5}{group['median']:>8.3f}{iqr:>14}")
    n_failures = len(summary["failures"]["records"]) + len(summary["failures"]["cells"])
    lines += [
        "",
        f"records: {summary['n_scored']}/{summary['n_records']} scored, {n_failures} failures",
        "",
    ]
    return "\n".join(lines)
