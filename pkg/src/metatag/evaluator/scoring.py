"""Token-level scoring of predicted annotations against gold.

Each token is assessed independently as coded or uncoded, so partial span
overlaps earn proportional credit.  Zero-denominator conventions: a document
where both gold and prediction are empty scores 1.0 across the board (perfect
agreement on "no metaphor"); one-sided emptiness scores 0 for the undefined
measure.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..corpus.inline import parse_inline
from ..corpus.model import AnnotatedDocument, Span, Token
from ..corpus.segment import tokenize
from .align import AlignmentReport
from .sanitize import SanitizedAnnotation


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    fp: int
    fn: int

    def __post_init__(self) -> None:
        if min(self.tp, self.fp, self.fn) < 0:
            raise ValueError("confusion counts must be non-negative")


@dataclass(frozen=True)
class DocScore:
    doc_id: str
    counts: ConfusionCounts
    precision: float
    recall: float
    f1: float
    fidelity: float
    excluded_token_count: int


@dataclass(frozen=True)
class ProjectedLabels:
    labels: tuple[bool, ...]
    dropped_original_count: int  # original tokens the output echo lost


class LengthMismatch(ValueError):
    pass


def token_inside(token: Token, span: Span) -> bool:
    return span.start <= token.start and token.end <= span.end


def gold_labels(document: AnnotatedDocument, tokens: list[Token]) -> list[bool]:
    """A token is gold-positive iff it lies inside a gold span."""
    return [any(token_inside(t, s) for s in document.spans) for t in tokens]


def project_labels(
    sanitized: SanitizedAnnotation,
    alignment: AlignmentReport,
    original_tokens: list[Token],
) -> ProjectedLabels:
    """Carry predicted span labels back onto the original's tokens.

    An original token is positive iff its aligned output token sits inside a
    predicted span.  Tokens the model's echo dropped stay negative (they will
    score as misses) and are counted for diagnostics.
    """
    predicted = parse_inline(sanitized.annotated_text)
    output_tokens = tokenize(predicted.doc.text)
    output_positive = [
        any(token_inside(t, s) for s in predicted.spans) for t in output_tokens
    ]
    labels = [False] * len(original_tokens)
    for original_idx, output_idx in alignment.matched_pairs:
        labels[original_idx] = output_positive[output_idx]
    return ProjectedLabels(
        labels=tuple(labels),
        dropped_original_count=len(alignment.unmatched_original),
    )


def _rate(numerator: int, denominator: int, other_denominator: int) -> float:
    if denominator:
        return numerator / denominator
    return 1.0 if other_denominator == 0 else 0.0


def score_tokens(
    gold: list[bool] | tuple[bool, ...],
    pred: list[bool] | tuple[bool, ...],
    mask: list[bool] | tuple[bool, ...] | None = None,
    doc_id: str = "",
    fidelity: float = 1.0,
) -> DocScore:
    """Precision/recall/F1 over unmasked tokens; masked ones are ignored entirely."""
    if len(gold) != len(pred):
        raise LengthMismatch(f"gold has {len(gold)} labels, prediction {len(pred)}")
    if mask is not None and len(mask) != len(gold):
        raise LengthMismatch(f"mask has {len(mask)} entries, labels {len(gold)}")
    tp = fp = fn = 0
    excluded = 0
    for i, (g, p) in enumerate(zip(gold, pred)):
        if mask is not None and mask[i]:
            excluded += 1
            continue
        if g and p:
            tp += 1
        elif p:
            fp += 1
        elif g:
            fn += 1
    precision = _rate(tp, tp + fp, tp + fn)
    recall = _rate(tp, tp + fn, tp + fp)
    f1 = 0.0 if precision + recall == 0 else 2 * precision * recall / (precision + recall)
    return DocScore(
        doc_id=doc_id,
        counts=ConfusionCounts(tp, fp, fn),
        precision=precision,
        recall=recall,
        f1=f1,
        fidelity=fidelity,
        excluded_token_count=excluded,
    )
