from __future__ import annotations

import pytest

from stub_provider import StubProvider

from metatag.client import (
    AuthError,
    ChatRequest,
    ChatResponse,
    Mode,
    ProviderConfig,
    ReplayMiss,
    RetriesExhausted,
    TranscriptStore,
    complete,
    request_fingerprint,
)
from metatag.promptgen import Message, Role


def messages(text="tag this"):
    return (Message(Role.SYSTEM, "be brief"), Message(Role.USER, text))


@pytest.fixture()
def stub():
    provider = StubProvider().start()
    yield provider
    provider.stop()


def config_for(stub: StubProvider, **overrides) -> ProviderConfig:
    defaults = dict(
        base_url=stub.base_url,
        model_name="stub-model",
        max_parallel=4,
        timeout_s=5.0,
        max_retries=2,
        backoff_base_s=0.0,
    )
    defaults.update(overrides)
    return ProviderConfig(**defaults)


def test_fingerprint_stable_across_objects():
    a = request_fingerprint(list(messages()), "m", 0)
    b = request_fingerprint(list(messages()), "m", 0)
    assert a == b


def test_fingerprint_sensitive_to_every_component():
    base = request_fingerprint(list(messages()), "m", 0)
    assert request_fingerprint(list(messages("other")), "m", 0) != base
    assert request_fingerprint(list(messages()), "m2", 0) != base
    assert request_fingerprint(list(messages()), "m", 1) != base
    swapped = [Message(Role.USER, "be brief"), Message(Role.SYSTEM, "tag this")]
    assert request_fingerprint(swapped, "m", 0) != base


def test_transcript_store_round_trip(tmp_path):
    store = TranscriptStore(tmp_path)
    response = ChatResponse(content="hello", finish_reason="stop", usage=(1, 2), latency_s=0.5)
    store.put("abc", response)
    fresh = TranscriptStore(tmp_path)  # re-read from disk
    assert fresh.get("abc") == response
    assert "abc" in fresh
    assert fresh.get("missing") is None


def test_live_success_and_payload_shape(stub):
    request = ChatRequest(messages=messages(), model_name="stub-model")
    response = complete(request, config_for(stub), Mode.LIVE)
    assert response.content == "tag this"
    assert response.usage == (7, 11)
    sent = stub.requests[0]
    assert sent["model"] == "stub-model"
    assert [m["role"] for m in sent["messages"]] == ["system", "user"]
    assert "temperature" not in sent  # provider default unless explicitly set


def test_temperature_forwarded_when_set(stub):
    request = ChatRequest(messages=messages(), model_name="m", temperature=0.2)
    complete(request, config_for(stub), Mode.LIVE)
    assert stub.requests[0]["temperature"] == 0.2


def test_transient_429_then_success(stub):
    stub.chat_statuses = [429]
    request = ChatRequest(messages=messages(), model_name="m")
    response = complete(request, config_for(stub), Mode.LIVE)
    assert response.content == "tag this"
    assert stub.chat_calls == 2  # one failure, one success


def test_retries_exhausted(stub):
    stub.chat_statuses = [500, 503, 502]
    request = ChatRequest(messages=messages(), model_name="m")
    with pytest.raises(RetriesExhausted):
        complete(request, config_for(stub, max_retries=2), Mode.LIVE)
    assert stub.chat_calls == 3  # 1 + max_retries


def test_auth_error_is_not_retried(stub):
    stub.chat_statuses = [401, 200]
    request = ChatRequest(messages=messages(), model_name="m")
    with pytest.raises(AuthError):
        complete(request, config_for(stub), Mode.LIVE)
    assert stub.chat_calls == 1


def test_record_then_replay_bit_identical(stub, tmp_path):
    store = TranscriptStore(tmp_path / "transcripts")
    config = config_for(stub)
    request = ChatRequest(messages=messages(), model_name="m", repetition=3)
    recorded = complete(request, config, Mode.RECORD, store)
    stub.stop()  # no network available from here on
    replayed = complete(request, config, Mode.REPLAY, store)
    assert replayed == recorded
    assert replayed.content == "tag this"


def test_record_mode_does_not_refetch(stub, tmp_path):
    store = TranscriptStore(tmp_path / "transcripts")
    request = ChatRequest(messages=messages(), model_name="m")
    complete(request, config_for(stub), Mode.RECORD, store)
    complete(request, config_for(stub), Mode.RECORD, store)
    assert stub.chat_calls == 1


def test_replay_miss(tmp_path):
    store = TranscriptStore(tmp_path)
    request = ChatRequest(messages=messages(), model_name="m")
    config = ProviderConfig(base_url="http://127.0.0.1:1", model_name="m")
    with pytest.raises(ReplayMiss):
        complete(request, config, Mode.REPLAY, store)


def test_repetitions_recorded_independently(stub, tmp_path):
    store = TranscriptStore(tmp_path)
    for repetition in range(3):
        request = ChatRequest(messages=messages(), model_name="m", repetition=repetition)
        complete(request, config_for(stub), Mode.RECORD, store)
    assert stub.chat_calls == 3
    assert len(store) == 3
