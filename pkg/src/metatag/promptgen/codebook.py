"""Codebook loading and lexical chunk retrieval.

The default prompting mode injects the whole codebook; chunked retrieval
exists for codebooks that outgrow a model's context window.
"""

from __future__ import annotations

import math
import re
from pathlib import Path

from ..corpus.segment import tokenize
from .model import Codebook

_HEADING_RE = re.compile(r"^# (?!#)(.*)$", re.MULTILINE)


def load_codebook(path: str | Path) -> Codebook:
    """Split a markdown-like codebook into chunks at its top-level headings.

    Chunk text includes the heading line, so the chunks concatenate back to
    the full body.  Content before the first heading becomes an untitled
    chunk.
    """
    path = Path(path)
    body = path.read_text(encoding="utf-8")
    matches = list(_HEADING_RE.finditer(body))
    chunks: list[tuple[str, str]] = []
    if not matches:
        chunks.append(("", body))
        return Codebook(title=path.stem, body=body, chunks=tuple(chunks))
    if matches[0].start() > 0:
        chunks.append(("", body[:matches[0].start()]))
    for i, match in enumerate(matches):
        end = matches[i + 1].start() if i + 1 < len(matches) else len(body)
        chunks.append((match.group(1).strip(), body[match.start():end]))
    return Codebook(title=matches[0].group(1).strip(), body=body, chunks=tuple(chunks))


def _terms(text: str) -> list[str]:
    return [t.surface.casefold() for t in tokenize(text)]


def retrieve_chunks(
    codebook: Codebook, query: str, k: int
) -> list[tuple[str, str, float]]:
    """Rank chunks against the query by tf-idf-weighted term overlap.

    score(chunk) = sum over distinct query terms t of
    count(t in chunk) * ln(n_chunks / n_chunks_containing_t).
    Ties keep original chunk order; returns the top k.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    n = len(codebook.chunks)
    chunk_terms = [_terms(text) for _, text in codebook.chunks]
    query_terms = set(_terms(query))
    df: dict[str, int] = {}
    for terms in chunk_terms:
        for t in set(terms):
            df[t] = df.get(t, 0) + 1
    scored = []
    for i, (heading, text) in enumerate(codebook.chunks):
        score = 0.0
        for t in query_terms:
            tf = chunk_terms[i].count(t)
            if tf and df[t]:
                score += tf * math.log(n / df[t])
        scored.append((score, i, heading, text))
    scored.sort(key=lambda item: (-item[0], item[1]))
    return [(heading, text, score) for score, _, heading, text in scored[:k]]
