"""Turn span meaning notes into chain-of-thought example explanations.

Per-span basic/figurative meaning notes live next to the corpus in
``span-meanings.json``: a map from doc id to a list with one
``{"basic": ..., "figurative": ...}`` entry per span, in span order.
"""

from __future__ import annotations

import json
from pathlib import Path

from ..corpus.model import AnnotatedDocument, ExampleSentence
from .builders import render_explanation
from .model import ExplainedExample

MEANINGS_NAME = "span-meanings.json"


class MissingMeanings(KeyError):
    """A chain-of-thought example span has no basic/figurative meaning note."""


def load_span_meanings(corpus_dir: str | Path) -> dict[str, list[dict[str, str]]]:
    path = Path(corpus_dir) / MEANINGS_NAME
    if not path.exists():
        return {}
    return json.loads(path.read_text(encoding="utf-8"))


def explain_examples(
    examples: list[ExampleSentence],
    corpus: list[AnnotatedDocument],
    meanings: dict[str, list[dict[str, str]]],
) -> list[ExplainedExample]:
    """Attach one rendered explanation per span to each example sentence."""
    span_index = {
        doc.doc.id: {(s.start, s.end): i for i, s in enumerate(doc.spans)}
        for doc in corpus
    }
    explained: list[ExplainedExample] = []
    for example in examples:
        texts: list[str] = []
        for span in example.sentence.spans:
            key = (example.source_start + span.start, example.source_start + span.end)
            index = span_index.get(example.source_doc_id, {}).get(key)
            notes = meanings.get(example.source_doc_id, [])
            if index is None or index >= len(notes):
                raise MissingMeanings(
                    f"no meaning note for span {key} of {example.source_doc_id!r}"
                )
            note = notes[index]
            texts.append(
                render_explanation(
                    word=example.sentence.span_text(span),
                    basic_meaning=note["basic"],
                    figurative_meaning=note["figurative"],
                )
            )
        explained.append(ExplainedExample(example=example, explanations=tuple(texts)))
    return explained
