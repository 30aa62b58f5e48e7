"""Message and prompt-bundle types shared by all prompting strategies."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from ..corpus.model import ExampleSentence

# Sentinel lines the chain-of-thought prompt asks the model to wrap its
# annotated text in, so the sanitizer can cut it out of the surrounding
# reasoning deterministically.
BEGIN_SENTINEL = "---BEGIN ANNOTATED TEXT---"
END_SENTINEL = "---END ANNOTATED TEXT---"


class Role(str, Enum):
    SYSTEM = "system"
    USER = "user"
    ASSISTANT = "assistant"


class Strategy(str, Enum):
    ZERO_SHOT = "zero_shot"
    FEW_SHOT = "few_shot"
    COT = "cot"
    RAG = "rag"


class Ratio(str, Enum):
    EVEN = "even"
    ORIGINAL = "original"
    NA = "n/a"


@dataclass(frozen=True)
class Message:
    role: Role
    content: str

    def __post_init__(self) -> None:
        if not self.content:
            raise ValueError("message content must be non-empty")


class BundleShapeError(ValueError):
    """A bundle's message sequence violates the strategy's shape rules."""


@dataclass(frozen=True)
class PromptBundle:
    """The ordered message sequence realizing one strategy variant for one doc.

    example_refs records, per in-context example, where its sentence lives in
    the gold corpus (doc id, start, end) so the evaluator can mask those
    tokens out of scoring.
    """

    messages: tuple[Message, ...]
    strategy: Strategy
    n_examples: int
    ratio: Ratio
    doc_id: str
    expects_explanations: bool
    example_refs: tuple[tuple[str, int, int], ...] = ()

    def __post_init__(self) -> None:
        msgs = self.messages
        if len(msgs) < 2:
            raise BundleShapeError("bundle needs at least a system and a user message")
        if msgs[0].role is not Role.SYSTEM or msgs[-1].role is not Role.USER:
            raise BundleShapeError("bundle must start with system and end with user")
        if self.expects_explanations != (self.strategy is Strategy.COT):
            raise BundleShapeError("expects_explanations is reserved for the cot strategy")
        if self.strategy in (Strategy.FEW_SHOT, Strategy.COT):
            middle = msgs[1:-1]
            if len(middle) != 2 * self.n_examples:
                raise BundleShapeError(
                    f"expected {self.n_examples} (user, assistant) pairs, got {len(middle)} messages"
                )
            for i, msg in enumerate(middle):
                wanted = Role.USER if i % 2 == 0 else Role.ASSISTANT
                if msg.role is not wanted:
                    raise BundleShapeError(f"message {i + 1} should be {wanted.value}")
        elif len(msgs) != 2:
            raise BundleShapeError(f"{self.strategy.value} bundle must be exactly [system, user]")

    def as_payload(self) -> list[dict[str, str]]:
        """Messages in the shape the chat-completions wire format expects."""
        return [{"role": m.role.value, "content": m.content} for m in self.messages]


@dataclass(frozen=True)
class Codebook:
    """The annotation manual, chunked at its top-level headings."""

    title: str
    body: str
    chunks: tuple[tuple[str, str], ...]

    def __post_init__(self) -> None:
        if "".join(text for _, text in self.chunks) != self.body:
            raise ValueError("codebook chunks must concatenate back to the body")


@dataclass(frozen=True)
class ExplainedExample:
    """An example sentence plus one explanation per span, in span order."""

    example: ExampleSentence
    explanations: tuple[str, ...]

    def __post_init__(self) -> None:
        if len(self.explanations) != len(self.example.sentence.spans):
            raise ValueError("need exactly one explanation per span")
