"""Core data types for annotated review texts.

All character offsets count Unicode scalar values (Python string indices),
never bytes, so spans survive re-serialization in any encoding.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from enum import Enum


class MetaphorType(str, Enum):
    CONVENTIONAL = "conventional"
    CREATIVE = "creative"
    UNLABELLED = "unlabelled"


class SpanError(ValueError):
    """A span set violates the non-overlap / ordering / bounds rules."""


@dataclass(frozen=True)
class RawDocument:
    """One review text, identified by its filename stem."""

    id: str
    text: str

    def __post_init__(self) -> None:
        if not self.text.strip():
            raise ValueError(f"document {self.id!r} has empty text")


@dataclass(frozen=True, order=True)
class Span:
    """Half-open character range [start, end) marked as metaphorical."""

    start: int
    end: int
    metaphor_type: MetaphorType = MetaphorType.UNLABELLED


def validate_spans(spans: list[Span], text_length: int) -> None:
    """Raise SpanError unless spans are in-bounds, sorted, and disjoint."""
    prev_end = 0
    for span in spans:
        if not (0 <= span.start < span.end <= text_length):
            raise SpanError(f"span ({span.start}, {span.end}) out of bounds for length {text_length}")
        if span.start < prev_end:
            raise SpanError(f"span ({span.start}, {span.end}) overlaps or precedes an earlier span")
        prev_end = span.end


@dataclass(frozen=True)
class AnnotatedDocument:
    """A document plus its non-overlapping metaphor spans, sorted by start."""

    doc: RawDocument
    spans: tuple[Span, ...] = ()

    def __post_init__(self) -> None:
        validate_spans(list(self.spans), len(self.doc.text))

    def span_text(self, span: Span) -> str:
        return self.doc.text[span.start:span.end]


@dataclass(frozen=True)
class Token:
    """A word-like unit; surface always equals text[start:end]."""

    start: int
    end: int
    surface: str


@dataclass(frozen=True)
class SentenceSpan:
    start: int
    end: int


@dataclass(frozen=True)
class CorpusStats:
    n_texts: int
    n_sentences: int
    n_words: int
    n_metaphor_spans: int
    mean_text_length_words: float


@dataclass(frozen=True)
class ExampleSentence:
    """A sentence with at least one metaphor span, lifted out of its document.

    The sentence is re-anchored to offset 0; source_start/source_end locate it
    in the source document so its tokens can be excluded from scoring later.
    """

    source_doc_id: str
    sentence: AnnotatedDocument
    metaphor_types: tuple[MetaphorType, ...]
    source_start: int
    source_end: int

    def __post_init__(self) -> None:
        if not self.sentence.spans:
            raise ValueError("example sentence must contain at least one span")

    def type_counts(self) -> Counter[MetaphorType]:
        return Counter(self.metaphor_types)
