"""Turning raw model responses into token-level scores and discrepancy reports."""

from .aggregate import (
    STATS_COLUMNS,
    GroupSummary,
    StatsRow,
    aggregate,
    export_stats_table,
    sv_transform,
    write_stats_csv,
)
from .align import AlignmentReport, align
from .discrepancy import (
    TAXONOMY,
    TAXONOMY_LABELS,
    AdjudicationState,
    Discrepancy,
    DiscrepancyKind,
    extract_discrepancies,
)
from .sanitize import (
    ExtractionMethod,
    NoAnnotatedTextFound,
    SanitizedAnnotation,
    sanitize_output,
)
from .scoring import (
    ConfusionCounts,
    DocScore,
    LengthMismatch,
    ProjectedLabels,
    gold_labels,
    project_labels,
    score_tokens,
    token_inside,
)

__all__ = [
    "STATS_COLUMNS",
    "TAXONOMY",
    "TAXONOMY_LABELS",
    "AdjudicationState",
    "AlignmentReport",
    "ConfusionCounts",
    "Discrepancy",
    "DiscrepancyKind",
    "DocScore",
    "ExtractionMethod",
    "GroupSummary",
    "LengthMismatch",
    "NoAnnotatedTextFound",
    "ProjectedLabels",
    "SanitizedAnnotation",
    "StatsRow",
    "aggregate",
    "align",
    "export_stats_table",
    "extract_discrepancies",
    "gold_labels",
    "project_labels",
    "sanitize_output",
    "score_tokens",
    "sv_transform",
    "token_inside",
    "write_stats_csv",
]
