"""Read and write corpora as directories of tagged UTF-8 text files.

Each document is one ``<stem>.txt`` file whose stem is the document id.  Gold
files carry inline tags.  Span types may be encoded either as tag attributes
or in an optional sidecar file ``span-types.conf`` with lines of the form
``<doc_id>/<span_index> = conventional|creative`` (index counts spans in
order within the document).
"""

from __future__ import annotations

from dataclasses import replace
from pathlib import Path

from .inline import parse_inline, serialize_inline
from .model import AnnotatedDocument, MetaphorType

SIDECAR_NAME = "span-types.conf"


class CorpusLoadError(ValueError):
    pass


def _parse_sidecar(path: Path) -> dict[tuple[str, int], MetaphorType]:
    mapping: dict[tuple[str, int], MetaphorType] = {}
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            key, _, value = line.partition("=")
            doc_id, _, index = key.strip().rpartition("/")
            mapping[(doc_id, int(index))] = MetaphorType(value.strip())
        except (ValueError, KeyError) as exc:
            raise CorpusLoadError(f"{path.name}:{lineno}: bad sidecar line {line!r}") from exc
    return mapping


def load_corpus(directory: str | Path) -> list[AnnotatedDocument]:
    """Parse every .txt file in the directory, sorted by id."""
    directory = Path(directory)
    if not directory.is_dir():
        raise CorpusLoadError(f"corpus directory not found: {directory}")
    sidecar_path = directory / SIDECAR_NAME
    sidecar = _parse_sidecar(sidecar_path) if sidecar_path.exists() else {}
    docs: list[AnnotatedDocument] = []
    for path in sorted(directory.glob("*.txt")):
        raw = path.read_text(encoding="utf-8")
        try:
            doc = parse_inline(raw, doc_id=path.stem)
        except ValueError as exc:
            raise CorpusLoadError(f"{path.name}: {exc}") from exc
        spans = list(doc.spans)
        for i, span in enumerate(spans):
            labelled = sidecar.get((path.stem, i))
            if labelled is None:
                continue
            if span.metaphor_type is not MetaphorType.UNLABELLED and span.metaphor_type != labelled:
                raise CorpusLoadError(
                    f"{path.name}: span {i} tagged {span.metaphor_type.value} "
                    f"but sidecar says {labelled.value}"
                )
            spans[i] = replace(span, metaphor_type=labelled)
        docs.append(AnnotatedDocument(doc=doc.doc, spans=tuple(spans)))
    if not docs:
        raise CorpusLoadError(f"no .txt documents in {directory}")
    return docs


def save_corpus(corpus: list[AnnotatedDocument], directory: str | Path, emit_types: bool = True) -> None:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for doc in corpus:
        (directory / f"{doc.doc.id}.txt").write_text(
            serialize_inline(doc, emit_types=emit_types), encoding="utf-8"
        )
