from __future__ import annotations

import random
import re

from metatag.corpus import split_sentences, tokenize


def surfaces(text):
    return [t.surface for t in tokenize(text)]


def test_whitespace_split():
    tokens = tokenize("tells the tale")
    assert [(t.surface, t.start, t.end) for t in tokens] == [
        ("tells", 0, 5), ("the", 6, 9), ("tale", 10, 14),
    ]


def test_internal_hyphens_join():
    assert surfaces("tough-as-nails movie") == ["tough-as-nails", "movie"]


def test_punctuation_dropped():
    assert surfaces("Wait... what?!") == ["Wait", "what"]


def test_apostrophes_join():
    assert surfaces("don't stop") == ["don't", "stop"]
    assert surfaces("don’t stop") == ["don’t", "stop"]  # curly apostrophe


def test_leading_trailing_punctuation_separates():
    assert surfaces("-dash 'quote' end-") == ["dash", "quote", "end"]


def test_underscore_separates():
    assert surfaces("snake_case") == ["snake", "case"]


def test_surface_equals_slice():
    text = "The plot—such as it is—drifts; effects are 90's-era junk."
    for token in tokenize(text):
        assert text[token.start:token.end] == token.surface


def test_tokenization_totality():
    rng = random.Random(7)
    alphabet = "ab c.d-e'f!? \n’Uü3"
    for _ in range(300):
        text = "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 40)))
        tokens = tokenize(text)
        covered = set()
        for t in tokens:
            covered.update(range(t.start, t.end))
        for i, ch in enumerate(text):
            if ch.isalnum():
                assert i in covered, (text, i, ch)
        for a, b in zip(tokens, tokens[1:]):
            assert a.end <= b.start  # non-overlapping, sorted


def test_terminal_punctuation_boundaries():
    assert len(split_sentences("A. B? C!")) == 3


def test_abbreviation_suppresses_split():
    assert len(split_sentences("Mr. Smith left.")) == 1
    assert len(split_sentences("He lives on St. James Street. Really.")) == 2


def test_digit_after_period_does_not_split():
    assert len(split_sentences("See Fig. 2 for details. The plot thickens.")) == 2


def test_lowercase_after_period_does_not_split():
    assert len(split_sentences("It cost $3.50 at most. and it shows")) == 1


def test_empty_and_blank():
    assert split_sentences("") == []
    assert split_sentences("  \n ") == []


def test_closing_quote_stays_with_sentence():
    text = 'He said "stop." Then he left.'
    spans = split_sentences(text)
    assert len(spans) == 2
    assert text[spans[0].start:spans[0].end] == 'He said "stop."'


def test_sentences_cover_non_whitespace():
    texts = [
        "One. Two! Three?",
        "No terminal punctuation at all",
        "  Leading space. Trailing space.  ",
        "Ends mid... word. Yes.",
    ]
    for text in texts:
        spans = split_sentences(text)
        covered = set()
        for s in spans:
            covered.update(range(s.start, s.end))
        for i, ch in enumerate(text):
            if not ch.isspace():
                assert i in covered, (text, i)
        # concatenation of slices plus the whitespace between them is the text
        rebuilt = ""
        cursor = 0
        for s in spans:
            rebuilt += text[cursor:s.start] + text[s.start:s.end]
            cursor = s.end
        rebuilt += text[cursor:]
        assert rebuilt == text
