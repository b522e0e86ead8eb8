"""Token-embedding providers for the greedy-matching similarity metric.

The metric itself never performs I/O; these providers fetch embeddings
either from an HTTP endpoint or from a fixture file of precomputed vectors.
"""

from __future__ import annotations

import json
from pathlib import Path

import requests

from .errors import ConfigError, TransportError
from .llm import post_json_with_retries
from .metrics import TokenEmbeddings


class FixtureEmbeddings:
    """Looks up embeddings recorded as JSONL lines
    {"text": ..., "tokens": [...], "vectors": [[...], ...]} keyed by exact text."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._by_text: dict[str, TokenEmbeddings] = {}
        with self.path.open("r", encoding="utf-8") as handle:
            for lineno, line in enumerate(handle, start=1):
                if not line.strip():
                    continue
                try:
                    obj = json.loads(line)
                    self._by_text[obj["text"]] = TokenEmbeddings(
                        tokens=tuple(obj["tokens"]), vectors=obj["vectors"]
                    )
                except (json.JSONDecodeError, KeyError, TypeError):
                    raise ConfigError(f"{self.path}:{lineno}: malformed embedding entry") from None

    def embed(self, text: str) -> TokenEmbeddings:
        try:
            return self._by_text[text]
        except KeyError:
            raise ConfigError(f"no recorded embedding for text {text[:60]!r}...") from None


class HttpEmbeddings:
    """POSTs {"text": ...} to the endpoint, expects {"tokens", "vectors"}."""

    def __init__(
        self,
        endpoint_url: str,
        retries: int = 3,
        backoff: float = 0.5,
        timeout: float = 60.0,
        session: requests.Session | None = None,
    ):
        self.url = endpoint_url
        self.retries = retries
        self.backoff = backoff
        self.timeout = timeout
        self.session = session or requests.Session()

    def embed(self, text: str) -> TokenEmbeddings:
        payload = post_json_with_retries(
            self.session,
            self.url,
            {"text": text},
            {"Content-Type": "application/json"},
            self.timeout,
            self.retries,
            self.backoff,
        )
        try:
            return TokenEmbeddings(tokens=tuple(payload["tokens"]), vectors=payload["vectors"])
        except (KeyError, TypeError):
            raise TransportError("malformed embedding response") from None
