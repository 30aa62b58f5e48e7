"""Extraction of human-model disagreement runs for adjudication."""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum

from ..corpus.model import Span, Token

# Disagreement taxonomy served to the review tool; adjust per project.
TAXONOMY = (
    "decomposability",
    "degree_of_conventionality",
    "source_target_distinction",
    "explicit_comparison",
    "grammatical_cue",
    "comparison_relationship",
    "personification",
    "phrase_level_meaning",
    "twice_true",
)

TAXONOMY_LABELS = {
    "decomposability": "Decomposability",
    "degree_of_conventionality": "Degree of conventionality",
    "source_target_distinction": "Difficulties in perceiving a source-target distinction",
    "explicit_comparison": "Explicit comparisons",
    "grammatical_cue": "Grammatical uses that cue metaphoricity",
    "comparison_relationship": "Difficulties in perceiving a relationship based on comparison",
    "personification": "Personification",
    "phrase_level_meaning": "Phrase-level meaning",
    "twice_true": "Source-target confusion and twice true",
}


class DiscrepancyKind(str, Enum):
    FALSE_POSITIVE = "false_positive"
    FALSE_NEGATIVE = "false_negative"


class AdjudicationState(str, Enum):
    OPEN = "open"
    KEEP_GOLD = "keep_gold"
    ACCEPT_MODEL = "accept_model"
    EDITED = "edited"


@dataclass(frozen=True)
class Discrepancy:
    """A maximal run of tokens where prediction and gold disagree one way."""

    doc_id: str
    kind: DiscrepancyKind
    token_range: tuple[int, int]  # [start, end) token indices
    surface: str
    context: str
    taxonomy_label: str | None = None
    adjudication: AdjudicationState = AdjudicationState.OPEN
    edited_span: Span | None = None

    def to_json(self) -> dict:
        return {
            "doc_id": self.doc_id,
            "kind": self.kind.value,
            "token_range": list(self.token_range),
            "surface": self.surface,
            "context": self.context,
            "taxonomy_label": self.taxonomy_label,
            "adjudication": self.adjudication.value,
            "edited_span": (
                [self.edited_span.start, self.edited_span.end] if self.edited_span else None
            ),
        }

    @classmethod
    def from_json(cls, data: dict) -> "Discrepancy":
        edited = data.get("edited_span")
        return cls(
            doc_id=data["doc_id"],
            kind=DiscrepancyKind(data["kind"]),
            token_range=tuple(data["token_range"]),
            surface=data["surface"],
            context=data["context"],
            taxonomy_label=data.get("taxonomy_label"),
            adjudication=AdjudicationState(data.get("adjudication", "open")),
            edited_span=Span(edited[0], edited[1]) if edited else None,
        )


def extract_discrepancies(
    gold: list[bool] | tuple[bool, ...],
    pred: list[bool] | tuple[bool, ...],
    tokens: list[Token],
    context_width: int,
    text: str,
    doc_id: str = "",
    mask: list[bool] | tuple[bool, ...] | None = None,
) -> list[Discrepancy]:
    """Maximal same-kind disagreement runs with +/- context_width tokens of context.

    Masked tokens neither join nor continue a run, mirroring their exclusion
    from scoring.
    """
    if len(gold) != len(pred) or len(gold) != len(tokens):
        raise ValueError("gold, pred, and tokens must have equal length")

    def kind_at(i: int) -> DiscrepancyKind | None:
        if mask is not None and mask[i]:
            return None
        if pred[i] and not gold[i]:
            return DiscrepancyKind.FALSE_POSITIVE
        if gold[i] and not pred[i]:
            return DiscrepancyKind.FALSE_NEGATIVE
        return None

    found: list[Discrepancy] = []
    i = 0
    n = len(tokens)
    while i < n:
        kind = kind_at(i)
        if kind is None:
            i += 1
            continue
        j = i + 1
        while j < n and kind_at(j) is kind:
            j += 1
        ctx_start = tokens[max(0, i - context_width)].start
        ctx_end = tokens[min(n - 1, j - 1 + context_width)].end
        found.append(
            Discrepancy(
                doc_id=doc_id,
                kind=kind,
                token_range=(i, j),
                surface=text[tokens[i].start:tokens[j - 1].end],
                context=text[ctx_start:ctx_end],
            )
        )
        i = j
    return found
