"""Experiment configuration: one declarative YAML document per experiment.

Secrets never live in the file; provider keys are named by environment
variable (api_key_ref) and read at call time.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

import yaml

from ..client.model import Mode, ProviderConfig
from ..promptgen.builders import RagMode
from ..promptgen.model import Ratio


class Method(str, Enum):
    RAG = "rag"
    ZERO_SHOT = "zero_shot"
    FEW_SHOT = "few_shot"
    COT = "cot"
    FINE_TUNE = "fine_tune"


# How each method reports in the stats export: (core method, strategy).
METHOD_FAMILY = {
    Method.RAG: ("rag", "n/a"),
    Method.ZERO_SHOT: ("prompt_engineering", "zero_shot"),
    Method.FEW_SHOT: ("prompt_engineering", "few_shot"),
    Method.COT: ("prompt_engineering", "cot"),
    Method.FINE_TUNE: ("fine_tune", "n/a"),
}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ModelSpec:
    name: str
    provider: ProviderConfig
    model_type: str  # "open" | "closed"
    reasoning: bool = False

    def __post_init__(self) -> None:
        if self.model_type not in ("open", "closed"):
            raise ConfigError(f"model_type must be open or closed, got {self.model_type!r}")


@dataclass(frozen=True)
class ExperimentConfig:
    corpus_path: Path
    output_dir: Path
    models: tuple[ModelSpec, ...]
    methods: tuple[Method, ...]
    codebook_path: Path | None = None
    n_examples: tuple[int, ...] = (4, 8)
    ratios: tuple[Ratio, ...] = (Ratio.EVEN, Ratio.ORIGINAL)
    repetitions: int = 5
    seed: int = 0
    mode: Mode = Mode.REPLAY
    temperature: float | None = None
    fidelity_floor: float = 0.95
    context_width: int = 6
    resample_examples: bool = True  # fresh example sample per repetition
    pooled_scoring: bool = False
    split_fraction: float = 0.8
    rag_mode: RagMode = RagMode.FULL
    rag_k: int = 4
    prompt_dir: Path | None = None
    prompt_names: dict[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.repetitions < 1:
            raise ConfigError("repetitions must be at least 1")
        if not self.models:
            raise ConfigError("at least one model is required")
        if not self.methods:
            raise ConfigError("at least one method is required")
        for n in self.n_examples:
            if n not in (4, 8):
                raise ConfigError(f"n_examples entries must be 4 or 8, got {n}")
        if Method.RAG in self.methods and self.codebook_path is None:
            raise ConfigError("rag method requires codebook_path")


def load_config(path: str | Path) -> ExperimentConfig:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    data = yaml.safe_load(path.read_text(encoding="utf-8"))
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: config must be a mapping")
    try:
        models = tuple(
            ModelSpec(
                name=m["name"],
                provider=ProviderConfig(**m["provider"]),
                model_type=m.get("model_type", "closed"),
                reasoning=bool(m.get("reasoning", False)),
            )
            for m in data["models"]
        )
        return ExperimentConfig(
            corpus_path=_resolve(path, data["corpus"]),
            output_dir=_resolve(path, data["output_dir"]),
            codebook_path=_resolve(path, data["codebook"]) if data.get("codebook") else None,
            models=models,
            methods=tuple(Method(m) for m in data["methods"]),
            n_examples=tuple(data.get("n_examples", [4, 8])),
            ratios=tuple(Ratio(r) for r in data.get("ratios", ["even", "original"])),
            repetitions=int(data.get("repetitions", 5)),
            seed=int(data.get("seed", 0)),
            mode=Mode(data.get("mode", "replay")),
            temperature=data.get("temperature"),
            fidelity_floor=float(data.get("fidelity_floor", 0.95)),
            context_width=int(data.get("context_width", 6)),
            resample_examples=bool(data.get("resample_examples", True)),
            pooled_scoring=bool(data.get("pooled_scoring", False)),
            split_fraction=float(data.get("split_fraction", 0.8)),
            rag_mode=RagMode(data.get("rag_mode", "full")),
            rag_k=int(data.get("rag_k", 4)),
            prompt_dir=_resolve(path, data["prompt_dir"]) if data.get("prompt_dir") else None,
            prompt_names=dict(data.get("prompt_names", {})),
        )
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"{path}: {exc}") from exc


def _resolve(config_path: Path, value: str) -> Path:
    p = Path(value)
    return p if p.is_absolute() else (config_path.parent / p).resolve()
