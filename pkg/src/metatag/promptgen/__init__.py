"""Prompt assembly for every strategy/variant cell of the method matrix."""

from .assets import DEFAULT_ASSETS, UnknownPromptAsset, load_system_prompt
from .builders import (
    EXPLANATION_TEMPLATE,
    RagMode,
    build_cot,
    build_few_shot,
    build_rag,
    build_zero_shot,
    render_explanation,
)
from .codebook import load_codebook, retrieve_chunks
from .explain import MissingMeanings, explain_examples, load_span_meanings
from .model import (
    BEGIN_SENTINEL,
    BundleShapeError,
    Codebook,
    END_SENTINEL,
    ExplainedExample,
    Message,
    PromptBundle,
    Ratio,
    Role,
    Strategy,
)
from .sampling import InsufficientPool, sample_examples, stratum_sizes

__all__ = [
    "BEGIN_SENTINEL",
    "BundleShapeError",
    "Codebook",
    "DEFAULT_ASSETS",
    "END_SENTINEL",
    "EXPLANATION_TEMPLATE",
    "ExplainedExample",
    "InsufficientPool",
    "Message",
    "MissingMeanings",
    "PromptBundle",
    "RagMode",
    "Ratio",
    "Role",
    "Strategy",
    "UnknownPromptAsset",
    "build_cot",
    "build_few_shot",
    "build_rag",
    "build_zero_shot",
    "explain_examples",
    "load_codebook",
    "load_span_meanings",
    "load_system_prompt",
    "render_explanation",
    "retrieve_chunks",
    "sample_examples",
    "stratum_sizes",
]
