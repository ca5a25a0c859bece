"""Chat-completion transport: an HTTP client and a deterministic stub.

Both expose ``complete(stage, messages) -> str``. ``stage`` names the
calling role (``enrich``, ``manager``, ``refine``, ``judge_ops`` ...) so the
stub can answer per role.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable

import httpx

logger = logging.getLogger(__name__)

Messages = list[dict[str, Any]]
StubHandler = Callable[[Messages], str]

# Default stub responders, registered by the modules that own each stage.
STUB_HANDLERS: dict[str, StubHandler] = {}

_in_flight = threading.BoundedSemaphore(8)


def set_max_in_flight(n: int) -> None:
    """Cap concurrent HTTP requests across all clients in this process."""
    global _in_flight
    if n < 1:
        raise ValueError("in-flight cap must be >= 1")
    _in_flight = threading.BoundedSemaphore(n)


class TransportError(RuntimeError):
    def __init__(self, message: str, status: int | None = None):
        self.status = status
        super().__init__(message if status is None else f"{message} (status {status})")


class ConfigError(ValueError):
    """Missing or inconsistent endpoint configuration."""


def messages_hash(messages: Messages) -> str:
    blob = json.dumps(messages, sort_keys=True, ensure_ascii=False, separators=(",", ":"))
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


def user_text(messages: Messages) -> str:
    """Text of the last user message (content parts are joined)."""
    for msg in reversed(messages):
        if msg.get("role") == "user":
            content = msg.get("content", "")
            if isinstance(content, list):
                return "\n".join(p.get("text", "") for p in content if p.get("type") == "text")
            return content
    return ""


class ChatClient:
    stub = False
    model = ""

    def complete(self, stage: str, messages: Messages) -> str:
        raise NotImplementedError


@dataclass
class HttpChatClient(ChatClient):
    url: str
    model: str = "default"
    api_key: str | None = None
    temperature: float = 0.0
    timeout: float = 60.0
    retries: int = 2
    backoff: float = 0.5
    transport: httpx.BaseTransport | None = field(default=None, repr=False)

    def __post_init__(self):
        if not self.url:
            raise ConfigError("chat endpoint URL is not configured")

    @classmethod
    def from_env(cls, prefix: str = "WC_CHAT", **overrides) -> "HttpChatClient":
        url = overrides.pop("url", None) or os.environ.get(f"{prefix}_URL")
        if not url:
            raise ConfigError(f"{prefix}_URL is not set")
        key = overrides.pop("api_key", None) or os.environ.get(f"{prefix}_KEY") or os.environ.get("WC_CHAT_KEY")
        model = overrides.pop("model", None) or os.environ.get(f"{prefix}_MODEL", "default")
        return cls(url=url, api_key=key, model=model, **overrides)

    def complete(self, stage: str, messages: Messages) -> str:
        payload = {"model": self.model, "messages": messages, "temperature": self.temperature}
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        last_status = None
        last_error = "no attempt made"
        for attempt in range(self.retries + 1):
            if attempt:
                time.sleep(self.backoff * (2 ** (attempt - 1)))
            try:
                with _in_flight, httpx.Client(timeout=self.timeout, transport=self.transport) as client:
                    resp = client.post(self.url, json=payload, headers=headers)
            except httpx.HTTPError as exc:
                last_error = f"{type(exc).__name__}: {exc}"
                logger.warning("chat %s attempt %d failed: %s", stage, attempt + 1, last_error)
                continue
            last_status = resp.status_code
            if resp.status_code == 429 or resp.status_code >= 500:
                last_error = f"server returned {resp.status_code}"
                continue
            if resp.status_code >= 400:
                raise TransportError(f"chat endpoint rejected request for {stage}", resp.status_code)
            try:
                return resp.json()["choices"][0]["message"]["content"]
            except (ValueError, KeyError, IndexError, TypeError):
                raise TransportError(f"malformed chat reply for {stage}", resp.status_code) from None
        raise TransportError(f"chat request for {stage} failed after {self.retries + 1} attempts: {last_error}", last_status)


class StubClient(ChatClient):
    """Deterministic offline client.

    Lookup order per call: fixture file ``<stage>.json`` in ``fixtures_dir``
    (an object keyed by messages hash, ``"*"`` as fallback), then explicit
    ``handlers``, then the module-registered defaults in ``STUB_HANDLERS``.
    """

    stub = True
    model = "stub"

    def __init__(self, handlers: dict[str, StubHandler] | None = None, fixtures_dir: str | Path | None = None):
        self.handlers = dict(handlers or {})
        self.fixtures_dir = Path(fixtures_dir) if fixtures_dir else None
        self.calls: list[tuple[str, str]] = []

    def _fixture(self, stage: str, key: str) -> str | None:
        if self.fixtures_dir is None:
            return None
        path = self.fixtures_dir / f"{stage}.json"
        if not path.is_file():
            return None
        table = json.loads(path.read_text(encoding="utf-8"))
        return table.get(key, table.get("*"))

    def complete(self, stage: str, messages: Messages) -> str:
        key = messages_hash(messages)
        self.calls.append((stage, key))
        reply = self._fixture(stage, key)
        if reply is not None:
            return reply
        handler = self.handlers.get(stage) or STUB_HANDLERS.get(stage)
        if handler is None:
            raise TransportError(f"stub client has no response for stage {stage!r}")
        return handler(messages)
