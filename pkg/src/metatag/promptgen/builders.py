"""Assemble the message sequences for each prompting strategy.

All builders are pure: identical inputs give byte-identical bundles.
"""

from __future__ import annotations

from enum import Enum

from ..corpus.inline import serialize_inline
from ..corpus.model import ExampleSentence, RawDocument
from .codebook import retrieve_chunks
from .model import (
    BEGIN_SENTINEL,
    Codebook,
    END_SENTINEL,
    ExplainedExample,
    Message,
    PromptBundle,
    Ratio,
    Role,
    Strategy,
)

EXPLANATION_TEMPLATE = (
    'The word "{word}" has a more basic contemporary meaning: in other contexts, '
    "it refers to {basic}. In this example, it describes {figurative} by comparing "
    "them to something literally {basic}, which makes it a metaphorical usage."
)

_TEXT_REQUEST = (
    "Identify all metaphorical expressions in the following film review and mark "
    "each one by wrapping it in <Metaphor> and </Metaphor> tags. Return the full "
    "text with the tags added.\n\n{text}"
)

_SENTENCE_REQUEST = (
    "Identify all metaphorical expressions in the following sentence and mark "
    "each one by wrapping it in <Metaphor> and </Metaphor> tags. Return the full "
    "sentence with the tags added.\n\n{text}"
)

_COT_REQUEST = (
    "Identify all metaphorical expressions in the following film review and mark "
    "each one by wrapping it in <Metaphor> and </Metaphor> tags. Explain the "
    "reasoning behind each of your coding decisions. Put the complete tagged text "
    f"between a line reading {BEGIN_SENTINEL} and a line reading {END_SENTINEL}, "
    "and place your explanations after the closing line.\n\n{text}"
)


class RagMode(str, Enum):
    FULL = "full"
    RETRIEVED = "retrieved"


def render_explanation(word: str, basic_meaning: str, figurative_meaning: str) -> str:
    for name, value in (("word", word), ("basic_meaning", basic_meaning),
                        ("figurative_meaning", figurative_meaning)):
        if not value:
            raise ValueError(f"{name} must be non-empty")
    return EXPLANATION_TEMPLATE.format(
        word=word, basic=basic_meaning, figurative=figurative_meaning
    )


def _refs(examples: list[ExampleSentence]) -> tuple[tuple[str, int, int], ...]:
    return tuple((e.source_doc_id, e.source_start, e.source_end) for e in examples)


def build_zero_shot(doc: RawDocument, system_prompt: str) -> PromptBundle:
    return PromptBundle(
        messages=(
            Message(Role.SYSTEM, system_prompt),
            Message(Role.USER, _TEXT_REQUEST.format(text=doc.text)),
        ),
        strategy=Strategy.ZERO_SHOT,
        n_examples=0,
        ratio=Ratio.NA,
        doc_id=doc.id,
        expects_explanations=False,
    )


def build_few_shot(
    doc: RawDocument,
    examples: list[ExampleSentence],
    system_prompt: str,
    ratio: Ratio = Ratio.NA,
) -> PromptBundle:
    if not examples:
        raise ValueError("few-shot prompt needs at least one example")
    messages = [Message(Role.SYSTEM, system_prompt)]
    for example in examples:
        messages.append(
            Message(Role.USER, _SENTENCE_REQUEST.format(text=example.sentence.doc.text))
        )
        messages.append(
            Message(Role.ASSISTANT, serialize_inline(example.sentence, emit_types=False))
        )
    messages.append(Message(Role.USER, _TEXT_REQUEST.format(text=doc.text)))
    return PromptBundle(
        messages=tuple(messages),
        strategy=Strategy.FEW_SHOT,
        n_examples=len(examples),
        ratio=ratio,
        doc_id=doc.id,
        expects_explanations=False,
        example_refs=_refs(examples),
    )


def build_cot(
    doc: RawDocument,
    examples: list[ExplainedExample],
    system_prompt: str,
    ratio: Ratio = Ratio.NA,
) -> PromptBundle:
    if not examples:
        raise ValueError("chain-of-thought prompt needs at least one example")
    messages = [Message(Role.SYSTEM, system_prompt)]
    for explained in examples:
        sentence = explained.example.sentence
        messages.append(Message(Role.USER, _SENTENCE_REQUEST.format(text=sentence.doc.text)))
        tagged = serialize_inline(sentence, emit_types=False)
        messages.append(
            Message(Role.ASSISTANT, tagged + "\n\n" + "\n".join(explained.explanations))
        )
    messages.append(Message(Role.USER, _COT_REQUEST.format(text=doc.text)))
    return PromptBundle(
        messages=tuple(messages),
        strategy=Strategy.COT,
        n_examples=len(examples),
        ratio=ratio,
        doc_id=doc.id,
        expects_explanations=True,
        example_refs=_refs([e.example for e in examples]),
    )


def build_rag(
    doc: RawDocument,
    codebook: Codebook,
    mode: RagMode,
    k: int,
    system_prompt: str,
) -> PromptBundle:
    if not codebook.body.strip():
        raise ValueError("codebook is empty")
    if mode is RagMode.FULL:
        injected = codebook.body
    else:
        ranked = retrieve_chunks(codebook, query=doc.text, k=k)
        injected = "".join(text for _, text, _ in ranked)
    system = f"{system_prompt}\n\nCODEBOOK:\n{injected}"
    return PromptBundle(
        messages=(
            Message(Role.SYSTEM, system),
            Message(Role.USER, _TEXT_REQUEST.format(text=doc.text)),
        ),
        strategy=Strategy.RAG,
        n_examples=0,
        ratio=Ratio.NA,
        doc_id=doc.id,
        expects_explanations=False,
    )
