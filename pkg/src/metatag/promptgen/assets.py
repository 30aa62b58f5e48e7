"""System prompts live as versioned text assets, never as code literals.

The packaged defaults can be overridden by pointing an experiment config at a
prompt directory; assets are referenced by name (filename without .txt).
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path

DEFAULT_ASSETS = {
    "zero_shot": "system_tagging",
    "few_shot": "system_tagging",
    "cot": "system_tagging_cot",
    "rag": "system_tagging_rag",
}


class UnknownPromptAsset(KeyError):
    pass


def load_system_prompt(name: str, directory: str | Path | None = None) -> str:
    """Read a system prompt asset by name, trailing newline stripped."""
    if directory is not None:
        path = Path(directory) / f"{name}.txt"
        if not path.is_file():
            raise UnknownPromptAsset(f"no prompt asset {name!r} in {directory}")
        return path.read_text(encoding="utf-8").rstrip("\n")
    ref = resources.files("metatag.promptgen") / "assets" / f"{name}.txt"
    if not ref.is_file():
        raise UnknownPromptAsset(f"no packaged prompt asset {name!r}")
    return ref.read_text(encoding="utf-8").rstrip("\n")
