"""Inline tag markup: parse tagged text to offsets and back.

Grammar (strict, used for gold input): exactly ``<Metaphor>`` or
``<Metaphor type="conventional">`` / ``<Metaphor type="creative">`` to open
and ``</Metaphor>`` to close, case-sensitive.  Anything else is literal text.
The evaluator has its own lenient normalizer for model output; it never
applies here.
"""

from __future__ import annotations

import re

from .model import AnnotatedDocument, MetaphorType, RawDocument, Span

OPEN_TAG = "<Metaphor>"
CLOSE_TAG = "</Metaphor>"

_TAG_RE = re.compile(r'<Metaphor(?: type="(conventional|creative)")?>|</Metaphor>')


class TagError(ValueError):
    """Base class for inline markup errors; offset is in the tagged input."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (offset {offset})")
        self.offset = offset


class UnbalancedTags(TagError):
    pass


class NestedTags(TagError):
    pass


class EmptySpan(TagError):
    pass


def parse_inline(text_with_tags: str, doc_id: str = "inline") -> AnnotatedDocument:
    """Strip tags from the input, returning the bare text plus spans.

    Span offsets index the stripped text.  Raises UnbalancedTags, NestedTags,
    or EmptySpan on malformed markup; span overlap cannot arise because nesting
    is rejected.
    """
    stripped_parts: list[str] = []
    spans: list[Span] = []
    stripped_len = 0
    open_at: int | None = None  # stripped offset of the pending open tag
    open_type = MetaphorType.UNLABELLED
    pos = 0
    for match in _TAG_RE.finditer(text_with_tags):
        literal = text_with_tags[pos:match.start()]
        stripped_parts.append(literal)
        stripped_len += len(literal)
        pos = match.end()
        if match.group(0).startswith("</"):
            if open_at is None:
                raise UnbalancedTags("closing tag without a matching opening tag", match.start())
            if open_at == stripped_len:
                raise EmptySpan("opening tag immediately followed by closing tag", match.start())
            spans.append(Span(open_at, stripped_len, open_type))
            open_at = None
        else:
            if open_at is not None:
                raise NestedTags("opening tag inside an open span", match.start())
            open_at = stripped_len
            attr = match.group(1)
            open_type = MetaphorType(attr) if attr else MetaphorType.UNLABELLED
    if open_at is not None:
        raise UnbalancedTags("opening tag never closed", len(text_with_tags))
    stripped_parts.append(text_with_tags[pos:])
    return AnnotatedDocument(
        doc=RawDocument(id=doc_id, text="".join(stripped_parts)),
        spans=tuple(spans),
    )


def serialize_inline(doc: AnnotatedDocument, emit_types: bool = True) -> str:
    """Re-insert tags around each span.

    With emit_types set, spans with a known type carry the type attribute;
    unlabelled spans never do, so serialization is the exact inverse of
    parse_inline.  With emit_types unset, all spans serialize as bare tags
    (the form model predictions are expected to use).
    """
    text = doc.doc.text
    parts: list[str] = []
    cursor = 0
    for span in doc.spans:
        parts.append(text[cursor:span.start])
        if emit_types and span.metaphor_type is not MetaphorType.UNLABELLED:
            parts.append(f'<Metaphor type="{span.metaphor_type.value}">')
        else:
            parts.append(OPEN_TAG)
        parts.append(text[span.start:span.end])
        parts.append(CLOSE_TAG)
        cursor = span.end
    parts.append(text[cursor:])
    return "".join(parts)
