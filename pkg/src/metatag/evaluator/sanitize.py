"""Recover a scoreable tagged text from a raw model response.

Models are instructed to return only the coded text, but in practice they
add preambles, commentary, markdown fences, malformed tags, and (for
chain-of-thought prompts) reasoning around the sentinel-delimited block.
This module normalizes tag spelling, repairs tag structure, and picks the
candidate block that best aligns with the original document.  Every repair
leaves a warning so failure modes stay visible in reports.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum

from ..corpus.inline import CLOSE_TAG, OPEN_TAG, parse_inline
from ..corpus.model import RawDocument
from ..promptgen.model import BEGIN_SENTINEL, END_SENTINEL
from .align import align

_LENIENT_TAG_RE = re.compile(
    r"<\s*(/?)\s*metaphor(?:\s+type\s*=\s*[\"']?(?:conventional|creative)[\"']?)?\s*>",
    re.IGNORECASE,
)
_FENCE_RE = re.compile(r"^```[a-zA-Z]*\s*$")


class ExtractionMethod(str, Enum):
    WHOLE = "whole"
    SENTINEL_BLOCK = "sentinel_block"
    BEST_ALIGNED_BLOCK = "best_aligned_block"


@dataclass(frozen=True)
class SanitizedAnnotation:
    annotated_text: str
    extraction_method: ExtractionMethod
    warnings: tuple[str, ...]


class NoAnnotatedTextFound(ValueError):
    def __init__(self, best_fidelity: float, had_tags: bool):
        super().__init__(
            f"no candidate block aligns with the original (best fidelity {best_fidelity:.3f})"
        )
        self.best_fidelity = best_fidelity
        self.had_tags = had_tags


def _normalize_tags(text: str) -> tuple[str, list[str]]:
    warnings: list[str] = []

    def repl(match: re.Match) -> str:
        canonical = CLOSE_TAG if match.group(1) else OPEN_TAG
        if match.group(0) != canonical:
            warnings.append(f"normalized tag {match.group(0)!r}")
        return canonical

    return _LENIENT_TAG_RE.sub(repl, text), warnings


def _repair_structure(text: str) -> tuple[str, list[str]]:
    """Make the canonical-tag sequence strictly parseable: drop nested or
    unopened tags, close an unterminated span at end of text, remove empty
    spans."""
    warnings: list[str] = []
    parts: list[str] = []
    pos = 0
    depth = 0
    open_end = -1  # index in parts just after the pending open tag
    tag_re = re.compile(re.escape(OPEN_TAG) + "|" + re.escape(CLOSE_TAG))
    for match in tag_re.finditer(text):
        parts.append(text[pos:match.start()])
        pos = match.end()
        if match.group(0) == OPEN_TAG:
            if depth:
                warnings.append(f"dropped nested opening tag at {match.start()}")
                continue
            depth = 1
            parts.append(OPEN_TAG)
            open_end = len(parts)
        else:
            if not depth:
                warnings.append(f"dropped unmatched closing tag at {match.start()}")
                continue
            if not any(p for p in parts[open_end:]):
                del parts[open_end - 1:]
                warnings.append(f"removed empty tag pair at {match.start()}")
            else:
                parts.append(CLOSE_TAG)
            depth = 0
    parts.append(text[pos:])
    if depth:
        parts.append(CLOSE_TAG)
        warnings.append("closed unterminated tag at end of text")
    return "".join(parts), warnings


def _strip_preamble(text: str) -> tuple[str, list[str]]:
    """Drop leading blank/fence lines and leading lines that end in a colon
    before any tag has appeared."""
    warnings: list[str] = []
    lines = text.split("\n")
    start = 0
    while start < len(lines):
        line = lines[start].strip()
        if not line:
            start += 1
            continue
        if OPEN_TAG in lines[start] or CLOSE_TAG in lines[start]:
            break
        if _FENCE_RE.match(line):
            warnings.append("stripped code fence")
            start += 1
            continue
        if line.endswith(":"):
            warnings.append(f"stripped preamble line {line!r}")
            start += 1
            continue
        break
    lines = lines[start:]
    while lines and _FENCE_RE.match(lines[-1].strip()):
        warnings.append("stripped trailing code fence")
        lines.pop()
    return "\n".join(lines), warnings


def _sentinel_block(text: str) -> str | None:
    lines = text.split("\n")
    begin = end = None
    for i, line in enumerate(lines):
        if line.strip() == BEGIN_SENTINEL and begin is None:
            begin = i
        elif line.strip() == END_SENTINEL and begin is not None:
            end = i
            break
    if begin is None or end is None:
        return None
    return "\n".join(lines[begin + 1:end])


def _fidelity_of(candidate: str, original: str) -> float:
    stripped = parse_inline(candidate).doc.text
    return align(stripped, original).fidelity


def _best_line_window(text: str, original: str) -> tuple[str, float]:
    """Contiguous line window of the candidate that aligns best.  For long
    responses only edge trims are explored to bound the search."""
    lines = text.split("\n")
    n = len(lines)
    max_trim = n if n <= 20 else 10
    best, best_fid = text, _fidelity_of(text, original)
    for i in range(0, min(max_trim, n)):
        for j in range(n, max(i, n - max_trim), -1):
            if i == 0 and j == n:
                continue
            window = "\n".join(lines[i:j]).strip("\n")
            if not window.strip():
                continue
            fid = _fidelity_of(window, original)
            if fid > best_fid:
                best, best_fid = window, fid
    return best, best_fid


def sanitize_output(
    raw: str,
    original: RawDocument,
    expects_explanations: bool,
    fidelity_floor: float = 0.95,
) -> SanitizedAnnotation:
    """Extract and normalize the annotated text from a raw response.

    Candidate blocks are tried in order: the sentinel-delimited block (for
    chain-of-thought responses), the whole response minus recognized preamble
    lines, and finally the best-aligned contiguous line window.  The first
    candidate whose tag-stripped text aligns with the original at or above
    fidelity_floor wins; NoAnnotatedTextFound is raised when none does.
    """
    normalized, warnings = _normalize_tags(raw)
    had_tags = OPEN_TAG in normalized or CLOSE_TAG in normalized

    candidates: list[tuple[str, ExtractionMethod]] = []
    if expects_explanations:
        block = _sentinel_block(normalized)
        if block is not None:
            candidates.append((block, ExtractionMethod.SENTINEL_BLOCK))
        else:
            warnings.append("expected sentinel block not found")
    whole, preamble_warnings = _strip_preamble(normalized)
    candidates.append((whole, ExtractionMethod.WHOLE))

    best_fidelity = 0.0
    for text, method in candidates:
        repaired, repair_warnings = _repair_structure(text)
        fidelity = _fidelity_of(repaired, original.text)
        best_fidelity = max(best_fidelity, fidelity)
        if fidelity >= fidelity_floor:
            all_warnings = list(warnings) + repair_warnings
            if method is ExtractionMethod.WHOLE:
                all_warnings += preamble_warnings
            return SanitizedAnnotation(repaired, method, tuple(all_warnings))

    repaired, repair_warnings = _repair_structure(normalized)
    window, fidelity = _best_line_window(repaired, original.text)
    best_fidelity = max(best_fidelity, fidelity)
    if fidelity >= fidelity_floor:
        return SanitizedAnnotation(
            window,
            ExtractionMethod.BEST_ALIGNED_BLOCK,
            tuple(warnings + repair_warnings + ["extracted best-aligned line window"]),
        )
    raise NoAnnotatedTextFound(best_fidelity, had_tags)
