"""Russian prompt templates for the four LLM augmentation strategies.

Rendering is pure string assembly: the same strategy, text, labels and
lexicon always produce identical bytes. The two baseline strategies
(duplication, back translation) never render a prompt.
"""

from __future__ import annotations

import json
from enum import Enum
from importlib import resources
from pathlib import Path
from typing import Iterable

from .dataset import LABEL_CODES
from .errors import ConfigError, SchemaError


class PromptStrategy(Enum):
    P_TEXT = "p_text"
    G_TOPICS = "g_topics"
    P_TEXT_TOPICS = "p_text_topics"
    G_TOPICS_TEXT = "g_topics_text"
    DUPLICATE = "duplicate"
    BACK_TRANSLATE = "back_translate"

    @property
    def uses_llm(self) -> bool:
        return self in LLM_STRATEGIES

    @property
    def needs_topics(self) -> bool:
        return self in TOPIC_STRATEGIES


LLM_STRATEGIES = frozenset(
    {
        PromptStrategy.P_TEXT,
        PromptStrategy.G_TOPICS,
        PromptStrategy.P_TEXT_TOPICS,
        PromptStrategy.G_TOPICS_TEXT,
    }
)
TOPIC_STRATEGIES = frozenset(
    {PromptStrategy.G_TOPICS, PromptStrategy.P_TEXT_TOPICS, PromptStrategy.G_TOPICS_TEXT}
)

PARAPHRASE_PREFIX = "Перефразируй текст: "
GENERATE_PREFIX = (
    "Напиши короткий пост для экологического сообщества в социальной сети, "
    "относящийся к тематикам: "
)
PARAPHRASE_TOPICS_PREFIX = (
    "Перефразируй текст с учетом того, что он относится к следующим тематикам: "
)
SOURCE_TEXT_SEPARATOR = ". Исходный текст: "
EXAMPLE_SEPARATOR = ". Например: "

# Lexicon: label code -> Russian topic phrase, total over all nine codes.
TopicLexicon = dict[int, str]


def default_lexicon_path() -> Path:
    return Path(resources.files("greenaug").joinpath("data/lexicon.json"))


def load_lexicon(path: str | Path | None = None) -> TopicLexicon:
    """Load a topic lexicon from JSON ({"1": "phrase", ...}); ships a default."""
    source = Path(path) if path is not None else default_lexicon_path()
    try:
        raw = json.loads(source.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{source}: malformed lexicon JSON ({exc.msg})") from None
    if not isinstance(raw, dict):
        raise SchemaError(f"{source}: lexicon must be a JSON object")
    lexicon: TopicLexicon = {}
    for key, phrase in raw.items():
        try:
            code = int(key)
        except ValueError:
            raise SchemaError(f"{source}: non-integer label code {key!r}") from None
        if code not in LABEL_CODES:
            raise SchemaError(f"{source}: unknown label code {code}")
        if not isinstance(phrase, str) or not phrase:
            raise SchemaError(f"{source}: empty phrase for label {code}")
        lexicon[code] = phrase
    missing = [code for code in LABEL_CODES if code not in lexicon]
    if missing:
        raise SchemaError(f"{source}: missing phrases for label codes {missing}")
    return lexicon


def topics_phrase(labels: Iterable[int], lexicon: TopicLexicon) -> str:
    """Join the topic phrases of ``labels`` with ", ", ascending code order."""
    codes = sorted(set(labels))
    if not codes:
        raise ConfigError("cannot build a topic phrase from an empty label set")
    for code in codes:
        if code not in lexicon:
            raise ConfigError(f"lexicon has no phrase for label code {code}")
    return ", ".join(lexicon[code] for code in codes)


def render_prompt(
    strategy: PromptStrategy,
    text: str,
    labels: Iterable[int],
    lexicon: TopicLexicon,
) -> str:
    """Instantiate the strategy's template with the source text and topics."""
    if not strategy.uses_llm:
        raise ConfigError(f"strategy {strategy.value!r} does not render a prompt")
    if strategy is PromptStrategy.P_TEXT:
        return PARAPHRASE_PREFIX + text
    topics = topics_phrase(labels, lexicon)
    if strategy is PromptStrategy.G_TOPICS:
        return GENERATE_PREFIX + topics
    if strategy is PromptStrategy.P_TEXT_TOPICS:
        return PARAPHRASE_TOPICS_PREFIX + topics + SOURCE_TEXT_SEPARATOR + text
    return GENERATE_PREFIX + topics + EXAMPLE_SEPARATOR + text
