"""Apply adjudication decisions to the gold corpus and export the result.

Closing the loop: the corrected corpus is valid gold input again, so it can
feed the next fine-tuning round.
"""

from __future__ import annotations

import logging
from dataclasses import replace
from pathlib import Path

from ..corpus.model import AnnotatedDocument, MetaphorType, Span
from ..corpus.store import load_corpus, save_corpus
from ..evaluator.discrepancy import AdjudicationState, DiscrepancyKind

log = logging.getLogger(__name__)


class UnadjudicatedRemaining(ValueError):
    def __init__(self, count: int):
        super().__init__(f"{count} discrepancies still open (use force to treat them as keep_gold)")
        self.count = count


def _trim(text: str, start: int, end: int) -> tuple[int, int]:
    while start < end and text[start].isspace():
        start += 1
    while end > start and text[end - 1].isspace():
        end -= 1
    return start, end


def _subtract(spans: list[Span], start: int, end: int, text: str) -> list[Span]:
    """Remove [start, end) from every overlapping span, keeping trimmed remainders."""
    out: list[Span] = []
    for span in spans:
        if span.end <= start or span.start >= end:
            out.append(span)
            continue
        for piece in ((span.start, min(span.end, start)), (max(span.start, end), span.end)):
            s, e = _trim(text, *piece)
            if s < e:
                out.append(replace(span, start=s, end=e))
    return out


def _insert(spans: list[Span], start: int, end: int, text: str,
            metaphor_type: MetaphorType = MetaphorType.UNLABELLED) -> list[Span]:
    """Insert a new span, shrunk to the largest gap free of existing spans."""
    occupied = sorted((s.start, s.end) for s in spans if s.end > start and s.start < end)
    gaps: list[tuple[int, int]] = []
    cursor = start
    for b_start, b_end in occupied:
        if b_start > cursor:
            gaps.append((cursor, min(b_start, end)))
        cursor = max(cursor, b_end)
    if cursor < end:
        gaps.append((cursor, end))
    gaps = [_trim(text, *gap) for gap in gaps]
    gaps = [g for g in gaps if g[0] < g[1]]
    if not gaps:
        log.warning("adopted span (%d, %d) vanished after overlap clamping", start, end)
        return spans
    s, e = max(gaps, key=lambda g: g[1] - g[0])
    if (s, e) != (start, end):
        log.warning("adopted span (%d, %d) clamped to (%d, %d)", start, end, s, e)
    return sorted(spans + [Span(s, e, metaphor_type)])


def apply_adjudications(
    report: dict,
    adjudications: dict[int, dict],
    corpus: list[AnnotatedDocument],
    force: bool = False,
) -> list[AnnotatedDocument]:
    """Return the corpus with accept_model/edited decisions folded in."""
    open_count = sum(
        1
        for disc in report["discrepancies"]
        if adjudications.get(disc["index"], {}).get("decision", "open") == "open"
    )
    if open_count and not force:
        raise UnadjudicatedRemaining(open_count)

    by_id = {doc.doc.id: doc for doc in corpus}
    corrected: dict[str, list[Span]] = {}
    for disc in sorted(report["discrepancies"], key=lambda d: d["index"]):
        decision = adjudications.get(disc["index"], {}).get("decision", "open")
        if decision in ("open", AdjudicationState.KEEP_GOLD.value):
            continue
        doc_id = disc["doc_id"]
        doc = by_id[doc_id]
        text = doc.doc.text
        spans = corrected.setdefault(doc_id, list(doc.spans))
        tokens = report["documents"][doc_id]["tokens"]
        tok_start, tok_end = disc["token_range"]
        char_start, char_end = tokens[tok_start][0], tokens[tok_end - 1][1]
        kind = DiscrepancyKind(disc["kind"])
        if decision == AdjudicationState.ACCEPT_MODEL.value:
            if kind is DiscrepancyKind.FALSE_POSITIVE:
                spans = _insert(spans, char_start, char_end, text)
            else:
                spans = _subtract(spans, char_start, char_end, text)
        elif decision == AdjudicationState.EDITED.value:
            edited = adjudications[disc["index"]].get("edited_span")
            if not edited:
                raise ValueError(f"discrepancy {disc['index']} marked edited without a span")
            e_start, e_end = edited
            if not (0 <= e_start < e_end <= len(text)):
                raise ValueError(f"edited span ({e_start}, {e_end}) out of bounds for {doc_id}")
            spans = _subtract(spans, char_start, char_end, text)
            spans = _insert(spans, e_start, e_end, text)
        else:
            raise ValueError(f"unknown decision {decision!r}")
        corrected[doc_id] = spans

    return [
        AnnotatedDocument(doc=doc.doc, spans=tuple(sorted(corrected.get(doc.doc.id, doc.spans))))
        for doc in corpus
    ]


def export_corrected_corpus(
    report: dict,
    adjudications: dict[int, dict],
    corpus: list[AnnotatedDocument],
    out_dir: str | Path,
    force: bool = False,
) -> Path:
    out_dir = Path(out_dir)
    corrected = apply_adjudications(report, adjudications, corpus, force=force)
    save_corpus(corrected, out_dir, emit_types=True)
    load_corpus(out_dir)  # closure check: the export must reparse cleanly
    return out_dir
