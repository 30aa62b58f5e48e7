"""Corpus-level statistics and example-sentence extraction."""

from __future__ import annotations

import logging

from .model import AnnotatedDocument, CorpusStats, ExampleSentence, MetaphorType, RawDocument, Span
from .segment import split_sentences, tokenize

log = logging.getLogger(__name__)


class MissingTypeLabels(ValueError):
    """An example-sentence span lacks the conventional/creative label."""


def corpus_stats(corpus: list[AnnotatedDocument]) -> CorpusStats:
    n_texts = len(corpus)
    n_sentences = sum(len(split_sentences(d.doc.text)) for d in corpus)
    n_words = sum(len(tokenize(d.doc.text)) for d in corpus)
    n_spans = sum(len(d.spans) for d in corpus)
    return CorpusStats(
        n_texts=n_texts,
        n_sentences=n_sentences,
        n_words=n_words,
        n_metaphor_spans=n_spans,
        mean_text_length_words=(n_words / n_texts) if n_texts else 0.0,
    )


def extract_examples(
    corpus: list[AnnotatedDocument], require_types: bool = False
) -> list[ExampleSentence]:
    """Lift every sentence containing at least one span out of its document.

    Span offsets are re-anchored to the sentence.  Spans crossing a sentence
    boundary are skipped (and logged); with require_types set, any unlabelled
    span in a qualifying sentence raises MissingTypeLabels.
    """
    examples: list[ExampleSentence] = []
    for doc in corpus:
        text = doc.doc.text
        for sent in split_sentences(text):
            contained: list[Span] = []
            for span in doc.spans:
                if span.start >= sent.end or span.end <= sent.start:
                    continue
                if span.start < sent.start or span.end > sent.end:
                    log.warning(
                        "span (%d, %d) in %s crosses a sentence boundary; skipped",
                        span.start, span.end, doc.doc.id,
                    )
                    continue
                contained.append(span)
            if not contained:
                continue
            if require_types and any(
                s.metaphor_type is MetaphorType.UNLABELLED for s in contained
            ):
                raise MissingTypeLabels(
                    f"unlabelled span in example sentence of {doc.doc.id!r}"
                )
            sentence = AnnotatedDocument(
                doc=RawDocument(id=f"{doc.doc.id}#s{sent.start}", text=text[sent.start:sent.end]),
                spans=tuple(
                    Span(s.start - sent.start, s.end - sent.start, s.metaphor_type)
                    for s in contained
                ),
            )
            examples.append(
                ExampleSentence(
                    source_doc_id=doc.doc.id,
                    sentence=sentence,
                    metaphor_types=tuple(s.metaphor_type for s in contained),
                    source_start=sent.start,
                    source_end=sent.end,
                )
            )
    return examples
