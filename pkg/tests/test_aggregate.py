from __future__ import annotations

import csv

import pytest

from metatag.evaluator import (
    STATS_COLUMNS,
    StatsRow,
    aggregate,
    export_stats_table,
    sv_transform,
    write_stats_csv,
)
from metatag.evaluator.scoring import ConfusionCounts, DocScore


def doc_score(f1: float) -> DocScore:
    return DocScore("d", ConfusionCounts(1, 0, 0), 1.0, 1.0, f1, 1.0, 0)


def test_single_score_collapses():
    summary = aggregate([doc_score(0.5)], key=("m",))
    assert summary.median_f1 == 0.5
    assert summary.iqr == (0.5, 0.5)
    assert summary.n_scores == 1


def test_two_scores_median_interpolates():
    summary = aggregate([doc_score(0.0), doc_score(1.0)], key=("m",))
    assert summary.median_f1 == 0.5


def test_quartiles_linear_interpolation():
    # inclusive method on [1,2,3,4]: q1=1.75, median=2.5, q3=3.25
    summary = aggregate([doc_score(x) for x in (1.0, 2.0, 3.0, 4.0)], key=("m",))
    assert summary.median_f1 == pytest.approx(2.5)
    assert summary.iqr == (pytest.approx(1.75), pytest.approx(3.25))


def test_quartile_ordering_invariant():
    import random

    rng = random.Random(9)
    for _ in range(100):
        scores = [doc_score(rng.random()) for _ in range(rng.randint(1, 20))]
        s = aggregate(scores, key=("m",))
        assert s.iqr[0] <= s.median_f1 <= s.iqr[1]


def test_sv_transform_values():
    assert sv_transform(1.0, 100) == pytest.approx(0.995, abs=1e-15)
    assert sv_transform(0.0, 100) == pytest.approx(0.005, abs=1e-15)
    for n in (1, 2, 10, 1000):
        assert sv_transform(0.5, n) == pytest.approx(0.5, abs=1e-15)


def test_sv_transform_strictly_order_preserving():
    values = [i / 20 for i in range(21)]
    for n in (2, 50, 500):
        transformed = [sv_transform(v, n) for v in values]
        assert all(a < b for a, b in zip(transformed, transformed[1:]))


def test_sv_transform_validates():
    with pytest.raises(ValueError):
        sv_transform(0.5, 0)
    with pytest.raises(ValueError):
        sv_transform(1.5, 10)


def make_rows() -> list[StatsRow]:
    return [
        StatsRow(
            f1=0.25 * i,
            n_tokens=40 + i,
            method="prompt_engineering",
            strategy="zero_shot",
            n_examples=0,
            ratio="n/a",
            model="m1",
            model_type="closed",
            text_length_words=40 + 3 * i,
            text_id=f"doc{i}",
            run_index=i % 2,
        )
        for i in range(4)
    ]


def test_export_centering_means_zero():
    rows = export_stats_table(make_rows())
    centred = [r["text_length_centered"] for r in rows]
    assert abs(sum(centred) / len(centred)) < 1e-9


def test_export_f1_sv_strictly_inside_unit_interval():
    rows = export_stats_table(make_rows())
    for row in rows:
        assert 0.0 < row["f1_sv"] < 1.0


def test_csv_header_and_shape(tmp_path):
    path = write_stats_csv(make_rows(), tmp_path / "stats.csv")
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        body = list(reader)
    assert header == STATS_COLUMNS
    assert len(body) == 4
    assert path.with_suffix(".meta.json").exists()


def test_csv_is_crlf_terminated(tmp_path):
    path = write_stats_csv(make_rows(), tmp_path / "stats.csv")
    assert b"\r\n" in path.read_bytes()
