from __future__ import annotations

import random

import pytest

from metatag.corpus import (
    AnnotatedDocument,
    MetaphorType,
    MissingTypeLabels,
    RawDocument,
    Span,
    corpus_stats,
    extract_examples,
    parse_inline,
)


def test_fixture_corpus_counts(corpus):
    """Counts fixed at fixture authoring time (sentence/token tallies checked
    by hand: 5 docs x 5 sentences; 47+45+44+36+43 words)."""
    stats = corpus_stats(corpus)
    assert stats.n_texts == 5
    assert stats.n_sentences == 25
    assert stats.n_words == 215
    assert stats.n_metaphor_spans == 16
    assert stats.mean_text_length_words == pytest.approx(43.0, rel=1e-9)


def test_empty_corpus():
    stats = corpus_stats([])
    assert (stats.n_texts, stats.n_sentences, stats.n_words, stats.n_metaphor_spans) == (0, 0, 0, 0)
    assert stats.mean_text_length_words == 0


def test_mean_consistency(corpus):
    stats = corpus_stats(corpus)
    assert stats.mean_text_length_words == pytest.approx(stats.n_words / stats.n_texts, rel=1e-9)


def test_permutation_invariance(corpus):
    shuffled = list(corpus)
    random.Random(3).shuffle(shuffled)
    assert corpus_stats(shuffled) == corpus_stats(corpus)


def test_extract_single_sentence_with_spans():
    doc = parse_inline(
        "First sentence is plain. The second <Metaphor>burns</Metaphor> bright. Third is plain.",
        doc_id="d",
    )
    examples = extract_examples([doc])
    assert len(examples) == 1
    ex = examples[0]
    assert ex.source_doc_id == "d"
    assert ex.sentence.doc.text == "The second burns bright."
    (span,) = ex.sentence.spans
    assert ex.sentence.doc.text[span.start:span.end] == "burns"


def test_extract_nothing_without_spans():
    doc = parse_inline("Just text. More text.", doc_id="d")
    assert extract_examples([doc]) == []


def test_extract_fixture_enumeration(corpus):
    """Fixture enumeration: 16 qualifying sentences, 11 all-conventional,
    5 all-creative (one creative sentence per document)."""
    examples = extract_examples(corpus)
    assert len(examples) == 16
    all_conv = [e for e in examples
                if all(t is MetaphorType.CONVENTIONAL for t in e.metaphor_types)]
    all_crea = [e for e in examples
                if all(t is MetaphorType.CREATIVE for t in e.metaphor_types)]
    assert len(all_conv) == 11
    assert len(all_crea) == 5
    assert sorted({e.source_doc_id for e in all_crea}) == [
        "arcadia", "bellweather", "cormorant", "driftwood", "ember",
    ]


def test_extract_offsets_are_sentence_relative(corpus):
    for ex in extract_examples(corpus):
        source = next(d for d in corpus if d.doc.id == ex.source_doc_id)
        assert source.doc.text[ex.source_start:ex.source_end] == ex.sentence.doc.text
        for span in ex.sentence.spans:
            global_slice = source.doc.text[
                ex.source_start + span.start:ex.source_start + span.end
            ]
            assert global_slice == ex.sentence.doc.text[span.start:span.end]


def test_require_types_raises_on_unlabelled():
    doc = AnnotatedDocument(
        doc=RawDocument(id="d", text="The engine sings loudly."),
        spans=(Span(11, 16),),  # unlabelled
    )
    assert len(extract_examples([doc])) == 1
    with pytest.raises(MissingTypeLabels):
        extract_examples([doc], require_types=True)


def test_cross_sentence_span_skipped(caplog):
    doc = AnnotatedDocument(
        doc=RawDocument(id="d", text="One thing. Two things."),
        spans=(Span(4, 14),),  # crosses the boundary between sentences
    )
    with caplog.at_level("WARNING"):
        examples = extract_examples([doc])
    assert examples == []
    assert any("crosses a sentence boundary" in r.message for r in caplog.records)
