"""Experiment engine: matrix expansion, execution, reporting, review API."""

from .config import ConfigError, ExperimentConfig, Method, ModelSpec, load_config
from .corrected import UnadjudicatedRemaining, apply_adjudications, export_corrected_corpus
from .matrix import Cell, EmptyMatrix, expand_matrix
from .report import ReportBundle, generate_report
from .review import AddressInUse, CorruptReport, ReviewStore, RevisionConflict, create_app, serve_review
from .runner import RunRecord, run_experiment

__all__ = [
    "AddressInUse",
    "Cell",
    "ConfigError",
    "CorruptReport",
    "EmptyMatrix",
    "ExperimentConfig",
    "Method",
    "ModelSpec",
    "ReportBundle",
    "ReviewStore",
    "RevisionConflict",
    "RunRecord",
    "UnadjudicatedRemaining",
    "apply_adjudications",
    "create_app",
    "expand_matrix",
    "export_corrected_corpus",
    "generate_report",
    "load_config",
    "run_experiment",
    "serve_review",
]
