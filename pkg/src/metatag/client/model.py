"""Provider configuration, request/response types, and client errors."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from ..hashing import stable_digest
from ..promptgen.model import Message


class Mode(str, Enum):
    LIVE = "live"
    RECORD = "record"
    REPLAY = "replay"


@dataclass(frozen=True)
class ProviderConfig:
    base_url: str
    model_name: str
    api_key_ref: str = "METATAG_API_KEY"
    max_parallel: int = 2
    timeout_s: float = 60.0
    max_retries: int = 3
    backoff_base_s: float = 0.5

    def __post_init__(self) -> None:
        if self.max_parallel < 1:
            raise ValueError("max_parallel must be at least 1")
        if self.max_retries < 0:
            raise ValueError("max_retries must be non-negative")


@dataclass(frozen=True)
class ChatRequest:
    """One chat-completion call.

    temperature stays None unless the experiment explicitly sets one, so the
    provider default applies.  The repetition index distinguishes otherwise
    identical calls across experimental runs.
    """

    messages: tuple[Message, ...]
    model_name: str
    temperature: float | None = None
    repetition: int = 0

    def fingerprint(self) -> str:
        return request_fingerprint(list(self.messages), self.model_name, self.repetition)

    def payload(self) -> dict:
        body: dict = {
            "model": self.model_name,
            "messages": [{"role": m.role.value, "content": m.content} for m in self.messages],
        }
        if self.temperature is not None:
            body["temperature"] = self.temperature
        return body


def request_fingerprint(messages: list[Message], model_name: str, repetition: int) -> str:
    """Stable across processes; changes iff content, model, or repetition does."""
    return stable_digest({
        "messages": [[m.role.value, m.content] for m in messages],
        "model": model_name,
        "repetition": repetition,
    })


@dataclass(frozen=True)
class ChatResponse:
    content: str
    finish_reason: str = "stop"
    usage: tuple[int, int] = (0, 0)  # (prompt_tokens, completion_tokens)
    latency_s: float = 0.0

    def to_json(self) -> dict:
        return {
            "content": self.content,
            "finish_reason": self.finish_reason,
            "usage": list(self.usage),
            "latency_s": self.latency_s,
        }

    @classmethod
    def from_json(cls, data: dict) -> "ChatResponse":
        return cls(
            content=data["content"],
            finish_reason=data["finish_reason"],
            usage=tuple(data["usage"]),
            latency_s=data["latency_s"],
        )


@dataclass(frozen=True)
class FineTuneSplit:
    seed: int
    train_doc_ids: frozenset[str]
    test_doc_ids: frozenset[str]
    fraction: float


class ClientError(RuntimeError):
    pass


class AuthError(ClientError):
    """401/403 from the provider; never retried."""


class RequestFailed(ClientError):
    """Non-retryable provider response (validation errors and the like)."""

    def __init__(self, message: str, status: int | None = None):
        super().__init__(message)
        self.status = status


class RetriesExhausted(ClientError):
    pass


class ReplayMiss(ClientError):
    def __init__(self, fingerprint: str):
        super().__init__(f"no recorded response for fingerprint {fingerprint}")
        self.fingerprint = fingerprint


class ProviderRejected(ClientError):
    pass


class Timeout(ClientError):
    pass


class ReasoningModelUnsupported(ClientError):
    """Fine-tuning is supervised-only; reasoning models are refused up front."""
