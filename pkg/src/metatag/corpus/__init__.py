"""Corpus parsing, segmentation, statistics, and storage."""

from .inline import EmptySpan, NestedTags, TagError, UnbalancedTags, parse_inline, serialize_inline
from .model import (
    AnnotatedDocument,
    CorpusStats,
    ExampleSentence,
    MetaphorType,
    RawDocument,
    SentenceSpan,
    Span,
    SpanError,
    Token,
)
from .segment import split_sentences, tokenize
from .stats import MissingTypeLabels, corpus_stats, extract_examples
from .store import CorpusLoadError, load_corpus, save_corpus

__all__ = [
    "AnnotatedDocument",
    "CorpusLoadError",
    "CorpusStats",
    "EmptySpan",
    "ExampleSentence",
    "MetaphorType",
    "MissingTypeLabels",
    "NestedTags",
    "RawDocument",
    "SentenceSpan",
    "Span",
    "SpanError",
    "TagError",
    "Token",
    "UnbalancedTags",
    "corpus_stats",
    "extract_examples",
    "load_corpus",
    "parse_inline",
    "save_corpus",
    "serialize_inline",
    "split_sentences",
    "tokenize",
]
