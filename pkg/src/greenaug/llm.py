"""Chat-completion client for OpenAI-compatible endpoints, with record/replay.

Replay mode never touches the network: a missing key is a hard error, so a
replayed augmentation run is a pure function of its inputs and the cache.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import threading
import time
from dataclasses import dataclass
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path

import requests

from .errors import (
    CacheMissError,
    ConfigError,
    GenerationError,
    TransportError,
)

log = logging.getLogger(__name__)

DEFAULT_MAX_NEW_TOKENS = 400
DEFAULT_TEMPERATURE = 0.5
DEFAULT_PARALLELISM = 4
API_KEY_ENV = "GREENAUG_API_KEY"


class CacheMode(Enum):
    LIVE = "live"
    RECORD = "record"
    REPLAY = "replay"


@dataclass(frozen=True)
class GenerationParams:
    model_name: str
    endpoint_url: str
    max_new_tokens: int = DEFAULT_MAX_NEW_TOKENS
    temperature: float = DEFAULT_TEMPERATURE

    def __post_init__(self):
        if self.max_new_tokens <= 0:
            raise ConfigError("max_new_tokens must be positive")
        if self.temperature < 0:
            raise ConfigError("temperature must be non-negative")


def cache_key(prompt: str, params: GenerationParams) -> str:
    """Stable SHA-256 over the generation-relevant inputs.

    The endpoint URL is deliberately excluded: it is transport, not
    generation semantics, and excluding it keeps recorded caches portable
    across hosts.
    """
    payload = json.dumps(
        {
            "prompt": prompt,
            "model": params.model_name,
            "max_new_tokens": params.max_new_tokens,
            "temperature": params.temperature,
        },
        sort_keys=True,
        ensure_ascii=False,
    )
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


class ReplayCache:
    """Append-only JSONL store of keyed responses.

    Concurrent readers share a dict; writes are serialized and deduplicated,
    so retries and parallel fetches can never produce two entries for one
    key. Also used by the translator client with its own field names.
    """

    def __init__(self, path: str | Path, value_field: str = "response_text"):
        self.path = Path(path)
        self.value_field = value_field
        self._lock = threading.Lock()
        self._entries: dict[str, str] = {}
        if self.path.exists():
            with self.path.open("r", encoding="utf-8") as handle:
                for lineno, line in enumerate(handle, start=1):
                    if not line.strip():
                        continue
                    try:
                        obj = json.loads(line)
                        self._entries[obj["cache_key"]] = obj[value_field]
                    except (json.JSONDecodeError, KeyError, TypeError):
                        raise ConfigError(
                            f"{self.path}:{lineno}: malformed cache entry"
                        ) from None

    def __len__(self) -> int:
        return len(self._entries)

    def get(self, key: str) -> str | None:
        with self._lock:
            return self._entries.get(key)

    def put(self, key: str, value: str, **extra: object) -> None:
        with self._lock:
            if key in self._entries:
                return
            record = {"cache_key": key}
            record.update(extra)
            record[self.value_field] = value
            record["timestamp"] = datetime.now(timezone.utc).isoformat()
            with self.path.open("a", encoding="utf-8", newline="\n") as handle:
                handle.write(json.dumps(record, ensure_ascii=False))
                handle.write("\n")
            self._entries[key] = value


def _retry_delays(retries: int, backoff: float) -> list[float]:
    return [backoff * (2**i) for i in range(retries - 1)]


def post_json_with_retries(
    session: requests.Session,
    url: str,
    body: dict,
    headers: dict[str, str],
    timeout: float,
    retries: int,
    backoff: float,
) -> dict:
    """POST with bounded retries on transport failures and 5xx; no retry on 4xx."""
    delays = _retry_delays(retries, backoff) + [None]
    last_error: Exception | None = None
    for delay in delays:
        try:
            response = session.post(url, json=body, headers=headers, timeout=timeout)
        except requests.RequestException as exc:
            last_error = exc
        else:
            if response.status_code < 400:
                try:
                    return response.json()
                except ValueError:
                    raise TransportError(f"{url}: response is not JSON") from None
            if 400 <= response.status_code < 500:
                raise TransportError(f"{url}: HTTP {response.status_code}: {response.text[:200]}")
            last_error = TransportError(f"{url}: HTTP {response.status_code}")
        if delay is None:
            break
        log.warning("request to %s failed (%s), retrying in %.1fs", url, last_error, delay)
        time.sleep(delay)
    raise TransportError(f"{url}: giving up after {retries} attempts: {last_error}")


def _completions_url(endpoint_url: str) -> str:
    base = endpoint_url.rstrip("/")
    if base.endswith("/chat/completions"):
        return base
    return base + "/chat/completions"


class LLMClient:
    """Issues chat completions as a single user-role message, no system prompt."""

    def __init__(
        self,
        cache: ReplayCache | None = None,
        mode: CacheMode = CacheMode.LIVE,
        retries: int = 3,
        backoff: float = 0.5,
        timeout: float = 120.0,
        session: requests.Session | None = None,
    ):
        if mode is not CacheMode.LIVE and cache is None:
            raise ConfigError(f"{mode.value} mode needs a cache")
        self.cache = cache
        self.mode = mode
        self.retries = retries
        self.backoff = backoff
        self.timeout = timeout
        self.session = session or requests.Session()
        self._inflight_guard = threading.Lock()
        self._key_locks: dict[str, threading.Lock] = {}

    def _key_lock(self, key: str) -> threading.Lock:
        with self._inflight_guard:
            return self._key_locks.setdefault(key, threading.Lock())

    def complete(self, prompt: str, params: GenerationParams) -> str:
        """Return generated text for ``prompt``, honoring the cache mode."""
        key = cache_key(prompt, params)
        if self.mode is not CacheMode.LIVE:
            hit = self.cache.get(key)
            if hit is not None:
                return hit
            if self.mode is CacheMode.REPLAY:
                raise CacheMissError(key)
        with self._key_lock(key):
            if self.mode is CacheMode.RECORD:
                hit = self.cache.get(key)
                if hit is not None:
                    return hit
            text = self._generate(prompt, params)
            if self.mode is CacheMode.RECORD:
                self.cache.put(key, text, prompt=prompt)
        return text

    def _generate(self, prompt: str, params: GenerationParams) -> str:
        headers = {"Content-Type": "application/json"}
        api_key = os.environ.get(API_KEY_ENV, "")
        if api_key:
            headers["Authorization"] = f"Bearer {api_key}"
        body = {
            "model": params.model_name,
            "messages": [{"role": "user", "content": prompt}],
            "max_tokens": params.max_new_tokens,
            "temperature": params.temperature,
        }
        payload = post_json_with_retries(
            self.session,
            _completions_url(params.endpoint_url),
            body,
            headers,
            self.timeout,
            self.retries,
            self.backoff,
        )
        try:
            content = payload["choices"][0]["message"]["content"]
        except (KeyError, IndexError, TypeError):
            raise TransportError("malformed chat-completion response") from None
        if not isinstance(content, str) or not content.strip():
            raise GenerationError("model returned empty text")
        return content.strip()
