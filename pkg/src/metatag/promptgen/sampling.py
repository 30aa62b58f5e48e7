"""Stratified sampling of in-context example sentences."""

from __future__ import annotations

import logging
import math
import random

from ..corpus.model import ExampleSentence, MetaphorType
from .model import Ratio

log = logging.getLogger(__name__)

# Conventional:creative ratio of the underlying annotation scheme's corpus,
# used when the prompt should mirror the natural distribution.
ORIGINAL_CONVENTIONAL_SHARE = 0.9


class InsufficientPool(ValueError):
    def __init__(self, stratum: str, needed: int, available: int):
        super().__init__(f"need {needed} {stratum} example sentences, pool has {available}")
        self.stratum = stratum


def _all_of_type(example: ExampleSentence, wanted: MetaphorType) -> bool:
    return all(t is wanted for t in example.metaphor_types)


def _round_half_up(x: float) -> int:
    return math.floor(x + 0.5)


def stratum_sizes(n: int, ratio: Ratio) -> tuple[int, int]:
    """(conventional, creative) counts for a sample of n examples."""
    if n not in (4, 8):
        raise ValueError(f"example count must be 4 or 8, got {n}")
    if ratio is Ratio.EVEN:
        return n // 2, n // 2
    if ratio is Ratio.ORIGINAL:
        n_conv = _round_half_up(n * ORIGINAL_CONVENTIONAL_SHARE)
        return n_conv, n - n_conv
    raise ValueError(f"ratio {ratio!r} does not define strata")


def sample_examples(
    pool: list[ExampleSentence], n: int, ratio: Ratio, seed: int
) -> list[ExampleSentence]:
    """Draw n examples without replacement, stratified by metaphor type.

    Strata are sentences whose spans are all conventional / all creative;
    mixed or unlabelled sentences are never drawn.  Deterministic for a given
    (pool order, n, ratio, seed); the returned order is shuffled by seed.
    """
    n_conv, n_creat = stratum_sizes(n, ratio)
    if n_creat == 0:
        log.warning("sample of %d at ratio %s degenerates to conventional-only", n, ratio.value)
    conventional = [e for e in pool if _all_of_type(e, MetaphorType.CONVENTIONAL)]
    creative = [e for e in pool if _all_of_type(e, MetaphorType.CREATIVE)]
    if len(conventional) < n_conv:
        raise InsufficientPool("all-conventional", n_conv, len(conventional))
    if len(creative) < n_creat:
        raise InsufficientPool("all-creative", n_creat, len(creative))
    rng = random.Random(seed)
    picked = rng.sample(conventional, n_conv) + rng.sample(creative, n_creat)
    rng.shuffle(picked)
    return picked
