"""Provider API access: chat completions, record/replay, fine-tuning."""

from .chat import complete
from .finetune import (
    FineTuneJobHandle,
    FineTuneJobSpec,
    FineTuneStatus,
    export_finetune_dataset,
    make_split,
    poll_finetune,
    submit_finetune,
    write_finetune_dataset,
)
from .model import (
    AuthError,
    ChatRequest,
    ChatResponse,
    ClientError,
    FineTuneSplit,
    Mode,
    ProviderConfig,
    ProviderRejected,
    ReasoningModelUnsupported,
    ReplayMiss,
    RequestFailed,
    RetriesExhausted,
    Timeout,
    request_fingerprint,
)
from .transcript import TranscriptStore

__all__ = [
    "AuthError",
    "ChatRequest",
    "ChatResponse",
    "ClientError",
    "FineTuneJobHandle",
    "FineTuneJobSpec",
    "FineTuneSplit",
    "FineTuneStatus",
    "Mode",
    "ProviderConfig",
    "ProviderRejected",
    "ReasoningModelUnsupported",
    "ReplayMiss",
    "RequestFailed",
    "RetriesExhausted",
    "Timeout",
    "TranscriptStore",
    "complete",
    "export_finetune_dataset",
    "make_split",
    "poll_finetune",
    "request_fingerprint",
    "submit_finetune",
    "write_finetune_dataset",
]
