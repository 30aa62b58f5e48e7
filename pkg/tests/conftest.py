from __future__ import annotations

import sys
from pathlib import Path

import pytest

TESTS_DIR = Path(__file__).parent
DATA_DIR = TESTS_DIR / "data"

sys.path.insert(0, str(TESTS_DIR))

from metatag.corpus import load_corpus  # noqa: E402


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture(scope="session")
def corpus():
    return load_corpus(DATA_DIR / "corpus")


@pytest.fixture(scope="session")
def corpus_dir() -> Path:
    return DATA_DIR / "corpus"


@pytest.fixture(scope="session")
def replay_run_dir(tmp_path_factory) -> Path:
    """The bundled replay experiment, executed once per session."""
    import shutil

    from replay_fixture import FIXTURE_DIR, replay_config

    from metatag.orchestrator.runner import run_experiment

    out = tmp_path_factory.mktemp("replay") / "out"
    config = replay_config(out)
    out.mkdir(parents=True)
    shutil.copytree(FIXTURE_DIR / "transcripts", out / "transcripts")
    run_experiment(config)
    return out


@pytest.fixture()
def review_dir(replay_run_dir, tmp_path) -> Path:
    """Private copy of the replay run for tests that mutate review state."""
    import shutil

    dst = tmp_path / "out"
    shutil.copytree(replay_run_dir, dst)
    return dst
