from __future__ import annotations

import pytest

from replay_fixture import DATA_DIR, _dead_provider

from metatag.client import Mode
from metatag.orchestrator import EmptyMatrix, ExperimentConfig, Method, ModelSpec, expand_matrix
from metatag.promptgen import Ratio


def config_with(methods, models=None, n_examples=(4, 8), ratios=(Ratio.EVEN, Ratio.ORIGINAL)):
    return ExperimentConfig(
        corpus_path=DATA_DIR / "corpus",
        codebook_path=DATA_DIR / "codebook.md",
        output_dir=DATA_DIR / "unused",
        models=models or (ModelSpec("m1", _dead_provider("m1-chat"), "closed"),),
        methods=methods,
        n_examples=n_examples,
        ratios=ratios,
        mode=Mode.REPLAY,
    )


def test_few_shot_crosses_variants():
    cells = expand_matrix(config_with((Method.FEW_SHOT,)))
    assert len(cells) == 4  # 2 example counts x 2 ratios
    assert {(c.n_examples, c.ratio) for c in cells} == {
        (4, Ratio.EVEN), (4, Ratio.ORIGINAL), (8, Ratio.EVEN), (8, Ratio.ORIGINAL),
    }


def test_zero_shot_ignores_variant_sets():
    cells = expand_matrix(config_with((Method.ZERO_SHOT,)))
    assert len(cells) == 1
    assert cells[0].n_examples == 0
    assert cells[0].ratio is Ratio.NA


def test_full_grid_on_non_reasoning_model():
    """1 zero-shot + 4 few-shot + 4 chain-of-thought + rag + fine-tune."""
    cells = expand_matrix(config_with(tuple(Method)))
    assert len(cells) == 11


def test_reasoning_model_skips_fine_tune():
    models = (
        ModelSpec("plain", _dead_provider("plain-chat"), "closed", reasoning=False),
        ModelSpec("deep", _dead_provider("deep-chat"), "closed", reasoning=True),
    )
    cells = expand_matrix(config_with(tuple(Method), models=models))
    by_model = {}
    for cell in cells:
        by_model.setdefault(cell.model.name, []).append(cell.method)
    assert Method.FINE_TUNE in by_model["plain"]
    assert Method.FINE_TUNE not in by_model["deep"]
    assert len(by_model["deep"]) == 10


def test_empty_matrix_raises():
    models = (ModelSpec("deep", _dead_provider("deep-chat"), "closed", reasoning=True),)
    with pytest.raises(EmptyMatrix):
        expand_matrix(config_with((Method.FINE_TUNE,), models=models))


def test_cell_keys_unique_and_stable():
    cells = expand_matrix(config_with(tuple(Method)))
    keys = [c.key for c in cells]
    assert len(set(keys)) == len(keys)
    assert "m1__zero_shot" in keys
    assert "m1__few_shot__n8_original" in keys
