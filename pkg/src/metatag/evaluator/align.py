"""Order-preserving token alignment between a model's echo and the original.

Uses Myers' shortest-edit-script algorithm, whose diagonal "snakes" yield a
maximum-length common subsequence: near-identical texts (the normal case,
since models are told to echo the input) align in close to linear time.
Surfaces are compared case-folded because models sometimes normalize
capitalization.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..corpus.segment import tokenize


@dataclass(frozen=True)
class AlignmentReport:
    """fidelity = matched original tokens / total original tokens."""

    fidelity: float
    matched_pairs: tuple[tuple[int, int], ...]  # (original_idx, output_idx), both increasing
    unmatched_original: tuple[int, ...]
    unmatched_output: tuple[int, ...]


def _match_pairs(a: list[str], b: list[str]) -> list[tuple[int, int]]:
    """Indices of a maximum common subsequence of a and b, per Myers (1986)."""
    n, m = len(a), len(b)
    if n == 0 or m == 0:
        return []
    # snaps[d][i] = furthest x on diagonal k = -d + 2i after edit depth d
    snaps: list[list[int]] = []
    v: dict[int, int] = {}
    found_d = -1
    for d in range(n + m + 1):
        snap: list[int] = []
        for k in range(-d, d + 1, 2):
            if k == -d or (k != d and v.get(k - 1, -1) < v.get(k + 1, -1)):
                x = v.get(k + 1, 0)
            else:
                x = v.get(k - 1, -1) + 1
            y = x - k
            while x < n and y < m and a[x] == b[y]:
                x += 1
                y += 1
            v[k] = x
            snap.append(x)
            if x >= n and y >= m:
                found_d = d
                break
        snaps.append(snap)
        if found_d >= 0:
            break

    def at_depth(snap_d: int, k: int) -> int:
        idx = (k + snap_d) // 2
        snap = snaps[snap_d]
        if idx < 0 or idx >= len(snap):
            return -1
        return snap[idx]

    pairs: list[tuple[int, int]] = []
    x, y = n, m
    for d in range(found_d, 0, -1):
        k = x - y
        if k == -d or (k != d and at_depth(d - 1, k - 1) < at_depth(d - 1, k + 1)):
            prev_k = k + 1
        else:
            prev_k = k - 1
        prev_x = at_depth(d - 1, prev_k)
        prev_y = prev_x - prev_k
        while x > prev_x and y > prev_y:
            pairs.append((x - 1, y - 1))
            x -= 1
            y -= 1
        x, y = prev_x, prev_y
    while x > 0 and y > 0:
        pairs.append((x - 1, y - 1))
        x -= 1
        y -= 1
    pairs.reverse()
    return pairs


def align(output_stripped: str, original: str) -> AlignmentReport:
    """Token-level alignment of a tag-stripped model output and the original text."""
    original_tokens = [t.surface.casefold() for t in tokenize(original)]
    output_tokens = [t.surface.casefold() for t in tokenize(output_stripped)]
    pairs = _match_pairs(original_tokens, output_tokens)
    matched_original = {i for i, _ in pairs}
    matched_output = {j for _, j in pairs}
    fidelity = len(pairs) / len(original_tokens) if original_tokens else 1.0
    return AlignmentReport(
        fidelity=fidelity,
        matched_pairs=tuple(pairs),
        unmatched_original=tuple(
            i for i in range(len(original_tokens)) if i not in matched_original
        ),
        unmatched_output=tuple(
            j for j in range(len(output_tokens)) if j not in matched_output
        ),
    )
