"""Fine-tuning: train/test splits, dataset export, and provider jobs.

Training records use the line-delimited chat format (one ``messages`` array
per line) that the standard fine-tuning APIs consume.  Assistant targets use
bare tags: the tuned model is expected to emit plain markup, not type
attributes.
"""

from __future__ import annotations

import json
import math
import os
import random
import time
from dataclasses import dataclass
from pathlib import Path

import httpx

from ..corpus.inline import serialize_inline
from ..corpus.model import AnnotatedDocument
from .model import (
    FineTuneSplit,
    ProviderConfig,
    ProviderRejected,
    ReasoningModelUnsupported,
    Timeout,
)

TERMINAL_STATUSES = frozenset({"succeeded", "failed", "cancelled"})


def make_split(corpus_ids: list[str], fraction: float, seed: int) -> FineTuneSplit:
    """Deterministic train/test partition; |train| = round(fraction * N)."""
    if not 0 < fraction < 1:
        raise ValueError("fraction must be strictly between 0 and 1")
    ids = sorted(corpus_ids)
    if len(set(ids)) != len(ids):
        raise ValueError("corpus ids must be unique")
    n_train = math.floor(fraction * len(ids) + 0.5)
    rng = random.Random(seed)
    rng.shuffle(ids)
    return FineTuneSplit(
        seed=seed,
        train_doc_ids=frozenset(ids[:n_train]),
        test_doc_ids=frozenset(ids[n_train:]),
        fraction=fraction,
    )


def export_finetune_dataset(
    corpus: list[AnnotatedDocument], split: FineTuneSplit, system_prompt: str
) -> tuple[list[dict], dict]:
    """One record per training document: system, untagged user, tagged assistant."""
    by_id = {doc.doc.id: doc for doc in corpus}
    missing = split.train_doc_ids - by_id.keys()
    if missing:
        raise KeyError(f"train ids not in corpus: {sorted(missing)}")
    records = []
    for doc_id in sorted(split.train_doc_ids):
        doc = by_id[doc_id]
        records.append({
            "messages": [
                {"role": "system", "content": system_prompt},
                {"role": "user", "content": doc.doc.text},
                {"role": "assistant", "content": serialize_inline(doc, emit_types=False)},
            ]
        })
    manifest = {
        "seed": split.seed,
        "fraction": split.fraction,
        "train_doc_ids": sorted(split.train_doc_ids),
        "test_doc_ids": sorted(split.test_doc_ids),
        "n_records": len(records),
    }
    return records, manifest


def write_finetune_dataset(records: list[dict], path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record, ensure_ascii=False) + "\n")
    return path


@dataclass(frozen=True)
class FineTuneJobSpec:
    config: ProviderConfig
    dataset_path: Path
    reasoning: bool = False


@dataclass(frozen=True)
class FineTuneJobHandle:
    job_id: str
    config: ProviderConfig


@dataclass(frozen=True)
class FineTuneStatus:
    status: str
    fine_tuned_model: str | None = None
    message: str = ""

    @property
    def terminal(self) -> bool:
        return self.status in TERMINAL_STATUSES


def _headers(config: ProviderConfig) -> dict[str, str]:
    key = os.environ.get(config.api_key_ref, "")
    return {"Authorization": f"Bearer {key}"} if key else {}


def submit_finetune(spec: FineTuneJobSpec) -> FineTuneJobHandle:
    """Upload the dataset and create a job; raises before any network call
    for reasoning models, whose multi-stage training the plain supervised
    API cannot reproduce."""
    if spec.reasoning:
        raise ReasoningModelUnsupported(
            f"{spec.config.model_name} is a reasoning model; supervised fine-tuning is unsupported"
        )
    base = spec.config.base_url.rstrip("/")
    timeout = spec.config.timeout_s
    with spec.dataset_path.open("rb") as fh:
        upload = httpx.post(
            f"{base}/files",
            files={"file": (spec.dataset_path.name, fh, "application/jsonl")},
            data={"purpose": "fine-tune"},
            headers=_headers(spec.config),
            timeout=timeout,
        )
    if upload.status_code >= 400:
        raise ProviderRejected(upload.text)
    file_id = upload.json()["id"]
    created = httpx.post(
        f"{base}/fine_tuning/jobs",
        json={"training_file": file_id, "model": spec.config.model_name},
        headers=_headers(spec.config),
        timeout=timeout,
    )
    if created.status_code >= 400:
        raise ProviderRejected(created.text)
    return FineTuneJobHandle(job_id=created.json()["id"], config=spec.config)


def poll_finetune(
    handle: FineTuneJobHandle,
    interval_s: float = 5.0,
    timeout_s: float = 3600.0,
) -> FineTuneStatus:
    """Poll the job until it reaches a terminal status."""
    base = handle.config.base_url.rstrip("/")
    deadline = time.monotonic() + timeout_s
    while True:
        response = httpx.get(
            f"{base}/fine_tuning/jobs/{handle.job_id}",
            headers=_headers(handle.config),
            timeout=handle.config.timeout_s,
        )
        if response.status_code >= 400:
            raise ProviderRejected(response.text)
        body = response.json()
        status = FineTuneStatus(
            status=body.get("status", "unknown"),
            fine_tuned_model=body.get("fine_tuned_model"),
            message=body.get("error") or "",
        )
        if status.terminal:
            return status
        if time.monotonic() >= deadline:
            raise Timeout(f"fine-tune job {handle.job_id} still {status.status} after {timeout_s}s")
        time.sleep(interval_s)
