"""Deterministic tokenization and sentence splitting.

Tokens are maximal runs of Unicode letters/digits; a single internal
apostrophe or hyphen joins two runs into one token ("don't",
"tough-as-nails").  Everything else separates, so punctuation-only runs are
never tokens.

Sentences end at a run of terminal punctuation [.?!] (plus any closing
quotes/brackets) followed by whitespace and an upper-case opener, unless the
preceding word is on a fixed abbreviation stop-list.  This is only used for
corpus statistics and example extraction, so a simple rule set beats a model.
"""

from __future__ import annotations

import re

from .model import SentenceSpan, Token

# [^\W_] = Unicode letter or digit; ' and ’ both count as apostrophes.
_TOKEN_RE = re.compile(r"[^\W_]+(?:['’\-][^\W_]+)*")

_TERMINALS = ".?!"
_CLOSERS = "\"'’”)]"
_OPENERS = "\"'‘“(["

# Words whose trailing period does not end a sentence.  Single capitals are
# deliberately absent: initial-style "A. B." splits.
_ABBREVIATIONS = frozenset({
    "Mr", "Mrs", "Ms", "Dr", "Prof", "Rev", "Gen", "Col", "Capt", "Sgt", "Lt",
    "St", "Jr", "Sr", "Mt", "Ft",
    "e.g", "i.e", "cf", "vs", "etc", "al", "ca", "approx",
    "Inc", "Ltd", "Co", "Corp", "Bros",
    "No", "Nos", "Vol", "Vols", "Fig", "Figs", "Ch", "Sec", "pp", "ed", "eds",
})

_ABBREV_CHUNK_RE = re.compile(r"[^\W\d_]+(?:\.[^\W\d_]+)*$")


def tokenize(text: str) -> list[Token]:
    return [Token(m.start(), m.end(), m.group(0)) for m in _TOKEN_RE.finditer(text)]


def _is_abbreviation(text: str, period_pos: int) -> bool:
    chunk = _ABBREV_CHUNK_RE.search(text, 0, period_pos)
    return chunk is not None and chunk.group(0) in _ABBREVIATIONS


def _boundary_after(text: str, punct_start: int) -> int | None:
    """If a sentence boundary begins at punct_start, return the sentence end offset."""
    i = punct_start
    while i < len(text) and text[i] in _TERMINALS:
        i += 1
    end = i
    while end < len(text) and text[end] in _CLOSERS:
        end += 1
    if end == len(text):
        return end
    if not text[end].isspace():
        return None
    j = end
    while j < len(text) and text[j].isspace():
        j += 1
    while j < len(text) and text[j] in _OPENERS:
        j += 1
    if j < len(text) and not text[j].isupper():
        return None
    if text[punct_start] == "." and punct_start + 1 == i and _is_abbreviation(text, punct_start):
        return None
    return end


def split_sentences(text: str) -> list[SentenceSpan]:
    spans: list[SentenceSpan] = []
    n = len(text)
    start = 0
    while start < n and text[start].isspace():
        start += 1
    if start == n:
        return []
    i = start
    while i < n:
        if text[i] in _TERMINALS:
            end = _boundary_after(text, i)
            if end is not None:
                spans.append(SentenceSpan(start, end))
                start = end
                while start < n and text[start].isspace():
                    start += 1
                if start == n:
                    return spans
                i = start
                continue
            # skip the whole punctuation run so we re-test only after it
            while i < n and text[i] in _TERMINALS:
                i += 1
            continue
        i += 1
    end = n
    while end > start and text[end - 1].isspace():
        end -= 1
    spans.append(SentenceSpan(start, end))
    return spans
