"""HTTP translator client mirroring the LLM client's record/replay discipline.

Speaks the LibreTranslate-style wire protocol: POST {"q", "source",
"target", "format": "text"} to a /translate endpoint, response
{"translatedText": "..."}.
"""

from __future__ import annotations

import hashlib
import json
from typing import Protocol

import requests

from .errors import CacheMissError, ConfigError, GenerationError, TransportError
from .llm import CacheMode, ReplayCache, post_json_with_retries


class Translator(Protocol):
    def translate(self, text: str, source_lang: str, target_lang: str) -> str: ...


def translation_key(text: str, source_lang: str, target_lang: str) -> str:
    payload = json.dumps(
        {"text": text, "source": source_lang, "target": target_lang},
        sort_keys=True,
        ensure_ascii=False,
    )
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def open_translation_cache(path) -> ReplayCache:
    return ReplayCache(path, value_field="translation")


class HttpTranslator:
    def __init__(
        self,
        endpoint_url: str,
        cache: ReplayCache | None = None,
        mode: CacheMode = CacheMode.LIVE,
        retries: int = 3,
        backoff: float = 0.5,
        timeout: float = 60.0,
        session: requests.Session | None = None,
    ):
        if mode is not CacheMode.LIVE and cache is None:
            raise ConfigError(f"{mode.value} mode needs a cache")
        base = endpoint_url.rstrip("/")
        self.url = base if base.endswith("/translate") else base + "/translate"
        self.cache = cache
        self.mode = mode
        self.retries = retries
        self.backoff = backoff
        self.timeout = timeout
        self.session = session or requests.Session()

    def translate(self, text: str, source_lang: str, target_lang: str) -> str:
        key = translation_key(text, source_lang, target_lang)
        if self.mode is not CacheMode.LIVE:
            hit = self.cache.get(key)
            if hit is not None:
                return hit
            if self.mode is CacheMode.REPLAY:
                raise CacheMissError(key)
        body = {"q": text, "source": source_lang, "target": target_lang, "format": "text"}
        payload = post_json_with_retries(
            self.session,
            self.url,
            body,
            {"Content-Type": "application/json"},
            self.timeout,
            self.retries,
            self.backoff,
        )
        translated = payload.get("translatedText") if isinstance(payload, dict) else None
        if not isinstance(translated, str):
            raise TransportError("malformed translate response")
        translated = translated.strip()
        if not translated:
            raise GenerationError("translator returned empty text")
        if self.mode is CacheMode.RECORD:
            self.cache.put(key, translated, text=text, source=source_lang, target=target_lang)
        return translated
