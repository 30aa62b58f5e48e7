"""Expansion of an experiment config into concrete job cells."""

from __future__ import annotations

from dataclasses import dataclass

from ..promptgen.model import Ratio
from .config import ExperimentConfig, Method, ModelSpec

# Methods where example count and ratio do not apply.
_NO_VARIANTS = (Method.RAG, Method.ZERO_SHOT, Method.FINE_TUNE)


class EmptyMatrix(ValueError):
    pass


@dataclass(frozen=True)
class Cell:
    model: ModelSpec
    method: Method
    n_examples: int = 0
    ratio: Ratio = Ratio.NA

    @property
    def key(self) -> str:
        base = f"{self.model.name}__{self.method.value}"
        if self.method in _NO_VARIANTS:
            return base
        ratio = self.ratio.value.replace("/", "")
        return f"{base}__n{self.n_examples}_{ratio}"


def expand_matrix(config: ExperimentConfig) -> list[Cell]:
    """Cross models with methods and applicable variants.

    Variant-free methods contribute one cell per model; few-shot and
    chain-of-thought cross n_examples with ratios.  Fine-tuning is skipped
    for reasoning models, whose training the supervised API cannot replicate.
    """
    cells: list[Cell] = []
    for model in config.models:
        for method in config.methods:
            if method is Method.FINE_TUNE and model.reasoning:
                continue
            if method in _NO_VARIANTS:
                cells.append(Cell(model=model, method=method))
                continue
            for n in config.n_examples:
                for ratio in config.ratios:
                    cells.append(Cell(model=model, method=method, n_examples=n, ratio=ratio))
    if not cells:
        raise EmptyMatrix("configuration produces no job cells")
    return cells
