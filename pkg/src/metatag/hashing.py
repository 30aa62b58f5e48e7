"""Stable hashing for request fingerprints and derived seeds.

Everything here must stay deterministic across processes and platforms:
replay lookups and per-repetition sampling both depend on it.  Python's
built-in hash() is salted per process, so sha256 over canonical JSON is used
instead.
"""

from __future__ import annotations

import hashlib
import json
from typing import Any


def canonical_json(value: Any) -> str:
    return json.dumps(value, sort_keys=True, ensure_ascii=False, separators=(",", ":"))


def stable_digest(value: Any) -> str:
    return hashlib.sha256(canonical_json(value).encode("utf-8")).hexdigest()


def derive_seed(*parts: Any) -> int:
    """Fold arbitrary JSON-serializable parts into a 63-bit seed."""
    return int(stable_digest(list(parts))[:16], 16) & (2**63 - 1)
