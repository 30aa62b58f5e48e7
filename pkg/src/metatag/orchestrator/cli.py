"""Command-line entry points.

    metatag validate --config cfg.yaml          corpus/codebook checks + stats
    metatag prompts --config cfg.yaml --out d/  emit golden prompt bundles
    metatag run --config cfg.yaml               run the experiment
    metatag report --config cfg.yaml            rebuild reports from records
    metatag review --config cfg.yaml            serve the review API + UI
    metatag export-corrected --config cfg.yaml --run RUN_ID [--force]
    metatag finetune-export --config cfg.yaml --out d/ [--seed N]
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from ..client.finetune import export_finetune_dataset, make_split, write_finetune_dataset
from ..corpus.stats import corpus_stats, extract_examples
from ..corpus.store import load_corpus
from ..hashing import derive_seed
from ..promptgen.codebook import load_codebook
from .config import ExperimentConfig, Method, load_config
from .matrix import Cell, expand_matrix


def _cmd_validate(config: ExperimentConfig) -> int:
    corpus = load_corpus(config.corpus_path)
    stats = corpus_stats(corpus)
    print(f"texts:           {stats.n_texts}")
    print(f"sentences:       {stats.n_sentences}")
    print(f"words:           {stats.n_words}")
    print(f"metaphor spans:  {stats.n_metaphor_spans}")
    print(f"mean length:     {stats.mean_text_length_words:.1f} words")
    examples = extract_examples(corpus)
    print(f"example sentences: {len(examples)}")
    if config.codebook_path:
        codebook = load_codebook(config.codebook_path)
        print(f"codebook: {codebook.title!r}, {len(codebook.chunks)} chunks")
    cells = expand_matrix(config)
    print(f"job cells: {len(cells)}")
    return 0


def _cmd_prompts(config: ExperimentConfig, out_dir: Path) -> int:
    """Write one serialized bundle per (strategy, n, ratio, seed) cell for the
    first corpus document."""
    from .runner import load_resources, plan_cell

    resources = load_resources(config)
    out_dir.mkdir(parents=True, exist_ok=True)
    doc_id = resources.corpus[0].doc.id
    count = 0
    for cell in expand_matrix(config):
        if cell.method is Method.FINE_TUNE:
            continue
        plan = plan_cell(config, resources, cell, repetition=0)
        ratio = cell.ratio.value.replace("/", "")
        name = f"{cell.method.value}__n{cell.n_examples}__{ratio}__seed{config.seed}.json"
        payload = {
            "strategy": cell.method.value,
            "n_examples": cell.n_examples,
            "ratio": cell.ratio.value,
            "seed": config.seed,
            "doc_id": doc_id,
            "expects_explanations": plan.expects_explanations,
            "example_refs": [list(ref) for ref in plan.example_refs],
            "messages": [
                {"role": m.role.value, "content": m.content} for m in plan.messages[doc_id]
            ],
        }
        (out_dir / name).write_text(
            json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n",
            encoding="utf-8",
        )
        count += 1
    print(f"wrote {count} prompt bundles to {out_dir}")
    return 0


def _cmd_run(config: ExperimentConfig) -> int:
    from .runner import run_experiment

    bundle = run_experiment(config)
    print((bundle.reports_dir / "summary.txt").read_text(encoding="utf-8"))
    print(f"reports in {bundle.reports_dir}")
    return 0


def _cmd_report(config: ExperimentConfig) -> int:
    from .report import generate_report
    from .runner import RunRecord

    records_dir = config.output_dir / "records"
    records = [
        RunRecord.from_json(json.loads(p.read_text(encoding="utf-8")))
        for p in sorted(records_dir.rglob("*.json"))
    ]
    if not records:
        print(f"no records under {records_dir}", file=sys.stderr)
        return 1
    corpus = load_corpus(config.corpus_path)
    bundle = generate_report(records, corpus, config, expand_matrix(config))
    print((bundle.reports_dir / "summary.txt").read_text(encoding="utf-8"))
    return 0


def _cmd_review(config: ExperimentConfig, address: str, ui_dir: Path | None) -> int:
    from .review import serve_review

    serve_review(config.output_dir, address, ui_dir)
    return 0


def _cmd_export_corrected(config: ExperimentConfig, run_id: str, force: bool) -> int:
    from .review import ReviewStore

    store = ReviewStore(config.output_dir)
    result = store.export(run_id, force=force)
    print(json.dumps(result, indent=2, sort_keys=True))
    return 0


def _cmd_finetune_export(config: ExperimentConfig, out_dir: Path, seed: int | None) -> int:
    from ..promptgen.assets import load_system_prompt

    corpus = load_corpus(config.corpus_path)
    split_seed = seed if seed is not None else derive_seed(config.seed, "finetune-export")
    split = make_split([d.doc.id for d in corpus], config.split_fraction, split_seed)
    prompt_name = config.prompt_names.get("zero_shot", "system_tagging")
    system_prompt = load_system_prompt(prompt_name, config.prompt_dir)
    records, manifest = export_finetune_dataset(corpus, split, system_prompt)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_finetune_dataset(records, out_dir / "dataset.jsonl")
    (out_dir / "manifest.json").write_text(
        json.dumps(manifest, indent=1, sort_keys=True) + "\n", encoding="utf-8"
    )
    print(f"{manifest['n_records']} training records -> {out_dir / 'dataset.jsonl'}")
    print(f"held-out test docs: {', '.join(manifest['test_doc_ids'])}")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="metatag", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str):
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, type=Path)
        return p

    add("validate")
    p_prompts = add("prompts")
    p_prompts.add_argument("--out", required=True, type=Path)
    add("run")
    add("report")
    p_review = add("review")
    p_review.add_argument("--address", default="127.0.0.1:8765")
    p_review.add_argument("--ui-dir", type=Path, default=None)
    p_export = add("export-corrected")
    p_export.add_argument("--run", required=True)
    p_export.add_argument("--force", action="store_true")
    p_ft = add("finetune-export")
    p_ft.add_argument("--out", required=True, type=Path)
    p_ft.add_argument("--seed", type=int, default=None)

    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format="%(levelname)s %(name)s: %(message)s")
    from .config import ConfigError

    try:
        config = load_config(args.config)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.command == "validate":
        return _cmd_validate(config)
    if args.command == "prompts":
        return _cmd_prompts(config, args.out)
    if args.command == "run":
        return _cmd_run(config)
    if args.command == "report":
        return _cmd_report(config)
    if args.command == "review":
        return _cmd_review(config, args.address, args.ui_dir)
    if args.command == "export-corrected":
        return _cmd_export_corrected(config, args.run, args.force)
    if args.command == "finetune-export":
        return _cmd_finetune_export(config, args.out, args.seed)
    return 2  # pragma: no cover


if __name__ == "__main__":
    sys.exit(main())
