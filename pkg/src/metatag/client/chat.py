"""Chat-completion calls with retry, backoff, and record/replay."""

from __future__ import annotations

import logging
import os
import time

import httpx

from .model import (
    AuthError,
    ChatRequest,
    ChatResponse,
    Mode,
    ProviderConfig,
    ReplayMiss,
    RequestFailed,
    RetriesExhausted,
)
from .transcript import TranscriptStore

log = logging.getLogger(__name__)

# Fixed transient set: rate limits, request timeouts, server-side failures.
# Everything else fails immediately to avoid retry storms on bad requests.
_TRANSIENT_STATUSES = frozenset({408, 429})


def _is_transient(status: int) -> bool:
    return status in _TRANSIENT_STATUSES or status >= 500


def _headers(config: ProviderConfig) -> dict[str, str]:
    headers = {"Content-Type": "application/json"}
    key = os.environ.get(config.api_key_ref, "")
    if key:
        headers["Authorization"] = f"Bearer {key}"
    return headers


def _parse_response(body: dict, latency_s: float) -> ChatResponse:
    try:
        choice = body["choices"][0]
        content = choice["message"]["content"]
        finish_reason = choice.get("finish_reason", "stop")
    except (KeyError, IndexError, TypeError) as exc:
        raise RequestFailed(f"malformed completion body: {exc}") from exc
    if finish_reason == "stop" and not content:
        raise RequestFailed("provider returned empty content with finish_reason=stop")
    usage = body.get("usage", {})
    return ChatResponse(
        content=content or "",
        finish_reason=finish_reason,
        usage=(usage.get("prompt_tokens", 0), usage.get("completion_tokens", 0)),
        latency_s=latency_s,
    )


def _call_once(request: ChatRequest, config: ProviderConfig) -> ChatResponse:
    url = config.base_url.rstrip("/") + "/chat/completions"
    started = time.monotonic()
    response = httpx.post(
        url, json=request.payload(), headers=_headers(config), timeout=config.timeout_s
    )
    latency = time.monotonic() - started
    if response.status_code in (401, 403):
        raise AuthError(f"authentication failed ({response.status_code})")
    if _is_transient(response.status_code):
        raise _Transient(f"HTTP {response.status_code}")
    if response.status_code >= 400:
        raise RequestFailed(response.text, status=response.status_code)
    try:
        body = response.json()
    except ValueError as exc:
        raise RequestFailed(f"non-JSON completion body: {exc}") from exc
    return _parse_response(body, latency)


class _Transient(Exception):
    pass


def complete(
    request: ChatRequest,
    config: ProviderConfig,
    mode: Mode,
    store: TranscriptStore | None = None,
) -> ChatResponse:
    """Run one chat completion in the given mode.

    live    — HTTP call with exponential backoff on transient failures.
    record  — as live, then persist fingerprint -> response in the store.
    replay  — return the stored response; no network at all.
    """
    if mode in (Mode.RECORD, Mode.REPLAY) and store is None:
        raise ValueError(f"{mode.value} mode needs a transcript store")
    fingerprint = request.fingerprint()
    if mode is Mode.REPLAY:
        stored = store.get(fingerprint)
        if stored is None:
            raise ReplayMiss(fingerprint)
        return stored
    if mode is Mode.RECORD:
        stored = store.get(fingerprint)
        if stored is not None:
            return stored

    attempts = 1 + config.max_retries
    last_failure = "no attempt made"
    for attempt in range(attempts):
        if attempt:
            delay = config.backoff_base_s * (2 ** (attempt - 1))
            if delay:
                time.sleep(delay)
        try:
            response = _call_once(request, config)
        except _Transient as exc:
            last_failure = str(exc)
            log.warning("transient failure (%s), attempt %d/%d", exc, attempt + 1, attempts)
            continue
        except httpx.TimeoutException as exc:
            last_failure = f"timeout: {exc}"
            log.warning("timeout, attempt %d/%d", attempt + 1, attempts)
            continue
        except httpx.TransportError as exc:
            last_failure = f"transport: {exc}"
            log.warning("transport failure (%s), attempt %d/%d", exc, attempt + 1, attempts)
            continue
        if mode is Mode.RECORD:
            store.put(fingerprint, response)
        return response
    raise RetriesExhausted(f"gave up after {attempts} attempts: {last_failure}")
