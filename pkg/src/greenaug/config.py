"""Shared application configuration: one JSON document, flags override it,
environment variables override only secrets (the API key)."""

from __future__ import annotations

import json
from dataclasses import dataclass, fields
from pathlib import Path

from .errors import ConfigError, SchemaError


@dataclass
class AppConfig:
    endpoint_url: str = "http://localhost:8000/v1"
    model_name: str = "t-lite-instruct-0.1"
    translator_url: str = "http://localhost:5000/translate"
    lexicon_path: str | None = None
    cache_path: str = "completions.jsonl"
    translator_cache_path: str | None = None
    seed: int = 0
    parallelism: int = 4

    def __post_init__(self):
        if self.parallelism < 1:
            raise ConfigError("parallelism must be >= 1")


def load_config(path: str | Path | None = None) -> AppConfig:
    if path is None:
        return AppConfig()
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file {path} does not exist")
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: malformed config JSON ({exc.msg})") from None
    if not isinstance(raw, dict):
        raise SchemaError(f"{path}: config must be a JSON object")
    known = {f.name for f in fields(AppConfig)}
    unknown = sorted(set(raw) - known)
    if unknown:
        raise SchemaError(f"{path}: unknown config keys {unknown}")
    return AppConfig(**raw)
