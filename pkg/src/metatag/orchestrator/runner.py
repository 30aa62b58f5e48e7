"""Experiment execution: expand cells, run repetitions, persist records.

Everything an experiment produces lands under output_dir:

    transcripts/            recorded responses, content-addressed by fingerprint
    records/<cell>/rep<k>/<doc>.json   one RunRecord per (cell, doc, repetition)
    finetune/<cell>/rep<k>/ dataset, split manifest, tuned model name
    reports/                derived views (summaries, stats CSV, discrepancies)

Records are append-only; a restarted run skips the ones already on disk, so
interrupting an experiment never duplicates network calls in record mode.
"""

from __future__ import annotations

import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

from ..client.chat import complete
from ..client.finetune import (
    FineTuneJobSpec,
    export_finetune_dataset,
    make_split,
    poll_finetune,
    submit_finetune,
    write_finetune_dataset,
)
from ..client.model import ChatRequest, ClientError, Mode, request_fingerprint
from ..client.transcript import TranscriptStore
from ..corpus.inline import parse_inline
from ..corpus.model import AnnotatedDocument, Token
from ..corpus.segment import tokenize
from ..corpus.stats import extract_examples
from ..corpus.store import load_corpus
from ..evaluator.align import align
from ..evaluator.sanitize import NoAnnotatedTextFound, sanitize_output
from ..evaluator.scoring import DocScore, gold_labels, project_labels, score_tokens
from ..hashing import derive_seed
from ..promptgen.assets import DEFAULT_ASSETS, load_system_prompt
from ..promptgen.builders import build_cot, build_few_shot, build_rag, build_zero_shot
from ..promptgen.codebook import load_codebook
from ..promptgen.explain import explain_examples, load_span_meanings
from ..promptgen.model import Codebook, Message, PromptBundle, Role
from ..promptgen.sampling import sample_examples
from .config import ExperimentConfig, Method, METHOD_FAMILY, ModelSpec
from .matrix import Cell, expand_matrix

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class RunRecord:
    """Everything needed to audit one model response for one document."""

    cell_key: str
    model: str
    model_type: str
    method: str
    strategy: str
    n_examples: int
    ratio: str
    doc_id: str
    repetition: int
    fingerprint: str
    wire_model_name: str
    text_length_words: int
    sanitized_text: str | None = None
    extraction_method: str | None = None
    warnings: tuple[str, ...] = ()
    fidelity: float | None = None
    gold_labels: tuple[int, ...] = ()
    pred_labels: tuple[int, ...] = ()
    mask: tuple[int, ...] = ()
    dropped_token_count: int = 0
    score: DocScore | None = None
    failure_kind: str | None = None  # transport | sanitization | fidelity
    failure_detail: str | None = None

    @property
    def scored(self) -> bool:
        return self.score is not None

    def to_json(self) -> dict:
        data = {
            "cell_key": self.cell_key,
            "model": self.model,
            "model_type": self.model_type,
            "method": self.method,
            "strategy": self.strategy,
            "n_examples": self.n_examples,
            "ratio": self.ratio,
            "doc_id": self.doc_id,
            "repetition": self.repetition,
            "fingerprint": self.fingerprint,
            "wire_model_name": self.wire_model_name,
            "text_length_words": self.text_length_words,
            "sanitized_text": self.sanitized_text,
            "extraction_method": self.extraction_method,
            "warnings": list(self.warnings),
            "fidelity": self.fidelity,
            "gold_labels": list(self.gold_labels),
            "pred_labels": list(self.pred_labels),
            "mask": list(self.mask),
            "dropped_token_count": self.dropped_token_count,
            "failure_kind": self.failure_kind,
            "failure_detail": self.failure_detail,
            "score": None,
        }
        if self.score is not None:
            data["score"] = {
                "tp": self.score.counts.tp,
                "fp": self.score.counts.fp,
                "fn": self.score.counts.fn,
                "precision": self.score.precision,
                "recall": self.score.recall,
                "f1": self.score.f1,
                "fidelity": self.score.fidelity,
                "excluded_token_count": self.score.excluded_token_count,
            }
        return data

    @classmethod
    def from_json(cls, data: dict) -> "RunRecord":
        score = None
        if data.get("score") is not None:
            s = data["score"]
            from ..evaluator.scoring import ConfusionCounts

            score = DocScore(
                doc_id=data["doc_id"],
                counts=ConfusionCounts(s["tp"], s["fp"], s["fn"]),
                precision=s["precision"],
                recall=s["recall"],
                f1=s["f1"],
                fidelity=s["fidelity"],
                excluded_token_count=s["excluded_token_count"],
            )
        return cls(
            cell_key=data["cell_key"],
            model=data["model"],
            model_type=data["model_type"],
            method=data["method"],
            strategy=data["strategy"],
            n_examples=data["n_examples"],
            ratio=data["ratio"],
            doc_id=data["doc_id"],
            repetition=data["repetition"],
            fingerprint=data["fingerprint"],
            wire_model_name=data["wire_model_name"],
            text_length_words=data["text_length_words"],
            sanitized_text=data.get("sanitized_text"),
            extraction_method=data.get("extraction_method"),
            warnings=tuple(data.get("warnings", [])),
            fidelity=data.get("fidelity"),
            gold_labels=tuple(data.get("gold_labels", [])),
            pred_labels=tuple(data.get("pred_labels", [])),
            mask=tuple(data.get("mask", [])),
            dropped_token_count=data.get("dropped_token_count", 0),
            score=score,
            failure_kind=data.get("failure_kind"),
            failure_detail=data.get("failure_detail"),
        )


@dataclass
class Resources:
    """Inputs shared across cells, loaded once per experiment."""

    corpus: list[AnnotatedDocument]
    tokens: dict[str, list[Token]]
    gold: dict[str, list[bool]]
    pool: list
    codebook: Codebook | None
    meanings: dict
    prompts: dict[str, str]


def load_resources(config: ExperimentConfig) -> Resources:
    corpus = load_corpus(config.corpus_path)
    tokens = {d.doc.id: tokenize(d.doc.text) for d in corpus}
    gold = {d.doc.id: gold_labels(d, tokens[d.doc.id]) for d in corpus}
    needs_examples = Method.FEW_SHOT in config.methods or Method.COT in config.methods
    pool = extract_examples(corpus, require_types=needs_examples) if needs_examples else []
    codebook = load_codebook(config.codebook_path) if config.codebook_path else None
    meanings = load_span_meanings(config.corpus_path) if Method.COT in config.methods else {}
    prompts = {
        kind: load_system_prompt(config.prompt_names.get(kind, default), config.prompt_dir)
        for kind, default in DEFAULT_ASSETS.items()
    }
    return Resources(
        corpus=corpus, tokens=tokens, gold=gold, pool=pool,
        codebook=codebook, meanings=meanings, prompts=prompts,
    )


def sampling_seed(config: ExperimentConfig, cell: Cell, repetition: int) -> int:
    """Seed for the example sample of (cell, repetition).

    With per-repetition resampling off, every repetition reuses the
    repetition-0 sample.
    """
    effective = repetition if config.resample_examples else 0
    return derive_seed(config.seed, cell.key, effective)


def split_seed(config: ExperimentConfig, cell: Cell, repetition: int) -> int:
    # Fine-tune splits always vary per repetition.
    return derive_seed(config.seed, cell.key, repetition, "split")


@dataclass(frozen=True)
class CellPlan:
    cell: Cell
    repetition: int
    wire_model_name: str
    doc_ids: tuple[str, ...]
    messages: dict[str, tuple[Message, ...]]
    example_refs: tuple[tuple[str, int, int], ...]
    expects_explanations: bool


def _finetune_plan(
    config: ExperimentConfig,
    resources: Resources,
    cell: Cell,
    repetition: int,
) -> CellPlan:
    """Per-repetition split; train on 80%, annotate only the held-out docs.

    The tuned model name is cached in the repetition's manifest so the
    expensive stage never reruns accidentally (and replay needs no network).
    """
    seed = split_seed(config, cell, repetition)
    split = make_split([d.doc.id for d in resources.corpus], config.split_fraction, seed)
    ft_dir = config.output_dir / "finetune" / cell.key / f"rep{repetition}"
    manifest_path = ft_dir / "manifest.json"
    system_prompt = resources.prompts["zero_shot"]
    if manifest_path.exists():
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
        tuned_name = manifest["fine_tuned_model"]
    else:
        if config.mode is Mode.REPLAY:
            raise FileNotFoundError(
                f"replay mode needs a recorded fine-tune manifest at {manifest_path}"
            )
        records, manifest = export_finetune_dataset(resources.corpus, split, system_prompt)
        dataset_path = write_finetune_dataset(records, ft_dir / "dataset.jsonl")
        handle = submit_finetune(
            FineTuneJobSpec(
                config=cell.model.provider,
                dataset_path=dataset_path,
                reasoning=cell.model.reasoning,
            )
        )
        status = poll_finetune(handle)
        if status.status != "succeeded" or not status.fine_tuned_model:
            raise ClientError(f"fine-tune job ended {status.status}: {status.message}")
        manifest["fine_tuned_model"] = status.fine_tuned_model
        manifest_path.write_text(
            json.dumps(manifest, indent=1, sort_keys=True), encoding="utf-8"
        )
        tuned_name = status.fine_tuned_model
    test_ids = tuple(sorted(split.test_doc_ids))
    by_id = {d.doc.id: d for d in resources.corpus}
    # Inference mirrors the training record shape: system prompt + bare text.
    messages = {
        doc_id: (Message(Role.SYSTEM, system_prompt), Message(Role.USER, by_id[doc_id].doc.text))
        for doc_id in test_ids
    }
    return CellPlan(
        cell=cell,
        repetition=repetition,
        wire_model_name=tuned_name,
        doc_ids=test_ids,
        messages=messages,
        example_refs=(),
        expects_explanations=False,
    )


def plan_cell(
    config: ExperimentConfig,
    resources: Resources,
    cell: Cell,
    repetition: int,
) -> CellPlan:
    """Build the per-document message sequences for one (cell, repetition)."""
    if cell.method is Method.FINE_TUNE:
        return _finetune_plan(config, resources, cell, repetition)

    bundles: dict[str, PromptBundle] = {}
    if cell.method in (Method.FEW_SHOT, Method.COT):
        seed = sampling_seed(config, cell, repetition)
        sample = sample_examples(resources.pool, cell.n_examples, cell.ratio, seed)
        if cell.method is Method.COT:
            explained = explain_examples(sample, resources.corpus, resources.meanings)
    for doc in resources.corpus:
        if cell.method is Method.ZERO_SHOT:
            bundle = build_zero_shot(doc.doc, resources.prompts["zero_shot"])
        elif cell.method is Method.FEW_SHOT:
            bundle = build_few_shot(doc.doc, sample, resources.prompts["few_shot"], cell.ratio)
        elif cell.method is Method.COT:
            bundle = build_cot(doc.doc, explained, resources.prompts["cot"], cell.ratio)
        elif cell.method is Method.RAG:
            bundle = build_rag(
                doc.doc, resources.codebook, config.rag_mode, config.rag_k,
                resources.prompts["rag"],
            )
        else:  # pragma: no cover
            raise AssertionError(cell.method)
        bundles[doc.doc.id] = bundle
    any_bundle = next(iter(bundles.values()))
    return CellPlan(
        cell=cell,
        repetition=repetition,
        wire_model_name=cell.model.provider.model_name,
        doc_ids=tuple(sorted(bundles)),
        messages={doc_id: b.messages for doc_id, b in bundles.items()},
        example_refs=any_bundle.example_refs,
        expects_explanations=any_bundle.expects_explanations,
    )


def mask_for(
    doc_id: str, tokens: list[Token], example_refs: tuple[tuple[str, int, int], ...]
) -> list[bool]:
    """True for tokens inside a sentence that served as an in-context example."""
    regions = [(start, end) for ref_doc, start, end in example_refs if ref_doc == doc_id]
    if not regions:
        return [False] * len(tokens)
    return [any(t.start >= s and t.end <= e for s, e in regions) for t in tokens]


def _record_path(output_dir: Path, cell_key: str, repetition: int, doc_id: str) -> Path:
    return output_dir / "records" / cell_key / f"rep{repetition}" / f"{doc_id}.json"


def _evaluate_response(
    base: RunRecord,
    content: str,
    doc: AnnotatedDocument,
    tokens: list[Token],
    gold: list[bool],
    mask: list[bool],
    expects_explanations: bool,
    fidelity_floor: float,
) -> RunRecord:
    try:
        sanitized = sanitize_output(content, doc.doc, expects_explanations, fidelity_floor)
    except NoAnnotatedTextFound as exc:
        kind = "fidelity" if exc.had_tags else "sanitization"
        return replace(
            base,
            failure_kind=kind,
            failure_detail=str(exc),
            fidelity=exc.best_fidelity,
        )
    stripped = parse_inline(sanitized.annotated_text).doc.text
    alignment = align(stripped, doc.doc.text)
    projected = project_labels(sanitized, alignment, tokens)
    score = score_tokens(
        gold, list(projected.labels), mask,
        doc_id=doc.doc.id, fidelity=alignment.fidelity,
    )
    return replace(
        base,
        sanitized_text=sanitized.annotated_text,
        extraction_method=sanitized.extraction_method.value,
        warnings=sanitized.warnings,
        fidelity=alignment.fidelity,
        gold_labels=tuple(int(g) for g in gold),
        pred_labels=tuple(int(p) for p in projected.labels),
        mask=tuple(int(m) for m in mask),
        dropped_token_count=projected.dropped_original_count,
        score=score,
    )


def _run_one(
    config: ExperimentConfig,
    resources: Resources,
    plan: CellPlan,
    doc_id: str,
    store: TranscriptStore,
) -> RunRecord:
    cell = plan.cell
    family, strategy = METHOD_FAMILY[cell.method]
    doc = next(d for d in resources.corpus if d.doc.id == doc_id)
    tokens = resources.tokens[doc_id]
    messages = plan.messages[doc_id]
    fingerprint = request_fingerprint(list(messages), plan.wire_model_name, plan.repetition)
    base = RunRecord(
        cell_key=cell.key,
        model=cell.model.name,
        model_type=cell.model.model_type,
        method=family,
        strategy=strategy if cell.method is not Method.FINE_TUNE else "n/a",
        n_examples=cell.n_examples,
        ratio=cell.ratio.value,
        doc_id=doc_id,
        repetition=plan.repetition,
        fingerprint=fingerprint,
        wire_model_name=plan.wire_model_name,
        text_length_words=len(tokens),
    )
    request = ChatRequest(
        messages=messages,
        model_name=plan.wire_model_name,
        temperature=config.temperature,
        repetition=plan.repetition,
    )
    try:
        response = complete(request, cell.model.provider, config.mode, store)
    except ClientError as exc:
        return replace(base, failure_kind="transport", failure_detail=str(exc))
    mask = mask_for(doc_id, tokens, plan.example_refs)
    return _evaluate_response(
        base, response.content, doc, tokens, resources.gold[doc_id], mask,
        plan.expects_explanations, config.fidelity_floor,
    )


def run_cell(
    config: ExperimentConfig,
    resources: Resources,
    cell: Cell,
    repetition: int,
    store: TranscriptStore,
) -> list[RunRecord]:
    plan = plan_cell(config, resources, cell, repetition)
    records: list[RunRecord] = []
    pending: list[str] = []
    for doc_id in plan.doc_ids:
        path = _record_path(config.output_dir, cell.key, repetition, doc_id)
        if path.exists():
            records.append(RunRecord.from_json(json.loads(path.read_text(encoding="utf-8"))))
        else:
            pending.append(doc_id)
    if pending:
        def run_and_persist(doc_id: str) -> RunRecord:
            record = _run_one(config, resources, plan, doc_id, store)
            # persist immediately: an interrupted run resumes without refetching
            path = _record_path(config.output_dir, cell.key, repetition, record.doc_id)
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(
                json.dumps(record.to_json(), indent=1, sort_keys=True, ensure_ascii=False),
                encoding="utf-8",
            )
            return record

        width = cell.model.provider.max_parallel
        with ThreadPoolExecutor(max_workers=width) as pool:
            records.extend(pool.map(run_and_persist, pending))
    records.sort(key=lambda r: r.doc_id)
    return records


def _write_config_snapshot(config: ExperimentConfig) -> None:
    """Record where the gold corpus lives so later stages (review, corrected
    export) can find it without the original config file."""
    snapshot = {
        "corpus_path": str(config.corpus_path),
        "codebook_path": str(config.codebook_path) if config.codebook_path else None,
        "seed": config.seed,
        "repetitions": config.repetitions,
        "mode": config.mode.value,
        "methods": [m.value for m in config.methods],
        "models": [m.name for m in config.models],
        "context_width": config.context_width,
        "fidelity_floor": config.fidelity_floor,
    }
    (config.output_dir / "config.json").write_text(
        json.dumps(snapshot, indent=1, sort_keys=True) + "\n", encoding="utf-8"
    )


def run_experiment(config: ExperimentConfig):
    """Execute every (cell, repetition, document) and derive the reports.

    Per-record failures are recorded, never fatal; config and corpus problems
    abort.  Returns the ReportBundle.
    """
    from .report import generate_report

    resources = load_resources(config)
    cells = expand_matrix(config)
    config.output_dir.mkdir(parents=True, exist_ok=True)
    _write_config_snapshot(config)
    store = TranscriptStore(config.output_dir / "transcripts")
    all_records: list[RunRecord] = []
    cell_failures: dict[str, str] = {}
    for cell in cells:
        for repetition in range(config.repetitions):
            try:
                all_records.extend(run_cell(config, resources, cell, repetition, store))
            except (ClientError, FileNotFoundError) as exc:
                # Cell-level setup failed (e.g. fine-tune job); record and move on.
                log.error("cell %s rep %d failed: %s", cell.key, repetition, exc)
                cell_failures[f"{cell.key}__rep{repetition}"] = str(exc)
    return generate_report(
        all_records, resources.corpus, config, cells, cell_failures
    )
