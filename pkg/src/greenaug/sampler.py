"""Grow a training set by repeatedly augmenting randomly drawn sentences.

A sampling plan (strategy, growth factor, seed, generation parameters)
together with a replay cache fully determines the output: sources are drawn
with replacement from the eligible originals in a seeded RNG stream, and
augmented records are appended in draw order regardless of how completions
are fetched.
"""

from __future__ import annotations

import logging
import math
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .dataset import Dataset, Origin, SentenceRecord, write_dataset
from .errors import ConfigError, GenerationError
from .llm import DEFAULT_PARALLELISM, GenerationParams, LLMClient
from .prompts import PromptStrategy, TopicLexicon, render_prompt
from .translate import Translator

log = logging.getLogger(__name__)

PAPER_GROWTH_FACTORS = (1.5, 2.0)
DEFAULT_PIVOT_LANG = "en"
SOURCE_LANG = "ru"


@dataclass(frozen=True)
class SamplingPlan:
    strategy: PromptStrategy
    growth_factor: float
    seed: int
    params: GenerationParams | None = None

    def __post_init__(self):
        if self.growth_factor < 1.0:
            raise ConfigError("growth factor must be >= 1")
        if self.growth_factor not in PAPER_GROWTH_FACTORS:
            log.warning(
                "growth factor %s is outside the evaluated set %s",
                self.growth_factor,
                PAPER_GROWTH_FACTORS,
            )
        if self.strategy.uses_llm and self.params is None:
            raise ConfigError(f"strategy {self.strategy.value!r} needs generation params")

    def target_size(self, original_size: int) -> int:
        # Half-up rounding; exact for the evaluated factors.
        return int(math.floor(self.growth_factor * original_size + 0.5))


def eligible_records(train: Dataset, strategy: PromptStrategy) -> list[SentenceRecord]:
    """Original records a strategy may draw from.

    Topic-bearing strategies require a non-empty label set; paraphrase-only
    and baseline strategies accept any original sentence.
    """
    records = [r for r in train.records if r.is_original]
    if strategy.needs_topics:
        records = [r for r in records if r.labels]
    return records


def select_source(
    rng: random.Random, train: Dataset, strategy: PromptStrategy
) -> SentenceRecord:
    """Uniform draw with replacement over the eligible original records."""
    eligible = eligible_records(train, strategy)
    return _draw(rng, eligible, strategy)


def _draw(
    rng: random.Random, eligible: list[SentenceRecord], strategy: PromptStrategy
) -> SentenceRecord:
    if not eligible:
        raise ConfigError(f"no eligible source records for strategy {strategy.value!r}")
    return eligible[rng.randrange(len(eligible))]


def back_translate(
    text: str,
    pivot: str = DEFAULT_PIVOT_LANG,
    translator: Translator | None = None,
    source_lang: str = SOURCE_LANG,
) -> str:
    """Round-trip the text through the pivot language."""
    if translator is None:
        raise ConfigError("back translation needs a translator")
    intermediate = translator.translate(text, source_lang, pivot)
    result = translator.translate(intermediate, pivot, source_lang)
    if not result:
        raise GenerationError("back translation produced empty text")
    return result


def augment_once(
    src: SentenceRecord,
    strategy: PromptStrategy,
    client: LLMClient | None = None,
    translator: Translator | None = None,
    lexicon: TopicLexicon | None = None,
    params: GenerationParams | None = None,
    new_id: str | None = None,
    pivot: str = DEFAULT_PIVOT_LANG,
) -> SentenceRecord:
    """Produce one augmented record from an original source sentence.

    The new record inherits the source's labels and post linkage and names
    the source in its provenance.
    """
    if not src.is_original:
        raise ConfigError(f"augmentation source {src.id!r} is not an original record")
    if strategy is PromptStrategy.DUPLICATE:
        text = src.text
    elif strategy is PromptStrategy.BACK_TRANSLATE:
        text = back_translate(src.text, pivot=pivot, translator=translator)
    else:
        if client is None or params is None or lexicon is None:
            raise ConfigError("LLM strategies need a client, params and a lexicon")
        text = client.complete(render_prompt(strategy, src.text, src.labels, lexicon), params)
    if not text:
        raise GenerationError(f"empty augmented text for source {src.id!r}")
    return SentenceRecord(
        id=new_id if new_id is not None else f"aug-of-{src.id}",
        post_id=src.post_id,
        text=text,
        labels=src.labels,
        origin=Origin(kind="augmented", strategy=strategy.value, source_id=src.id),
    )


def _fresh_ids(n: int, strategy: PromptStrategy, taken: set[str]) -> list[str]:
    ids = []
    for i in range(1, n + 1):
        candidate = f"aug-{strategy.value}-{i:05d}"
        while candidate in taken:
            candidate += "x"
        taken.add(candidate)
        ids.append(candidate)
    return ids


def run_plan(
    plan: SamplingPlan,
    train: Dataset,
    client: LLMClient | None = None,
    translator: Translator | None = None,
    lexicon: TopicLexicon | None = None,
    parallelism: int = DEFAULT_PARALLELISM,
    pivot: str = DEFAULT_PIVOT_LANG,
    partial_path: str | Path | None = None,
) -> Dataset:
    """Execute the plan: originals unchanged, then augmented records in draw order.

    A failed generation aborts the run; if ``partial_path`` is given, the
    originals plus the records completed before the failure are written
    there before the error propagates.
    """
    if not train.records:
        raise ConfigError("training set is empty")
    if any(not r.is_original for r in train.records):
        raise ConfigError("augmentation input must contain only original records")
    if parallelism < 1:
        raise ConfigError("parallelism must be >= 1")

    n_new = plan.target_size(len(train.records)) - len(train.records)
    if n_new <= 0:
        return Dataset(split=train.split, records=train.records)

    eligible = eligible_records(train, plan.strategy)
    rng = random.Random(plan.seed)
    sources = [_draw(rng, eligible, plan.strategy) for _ in range(n_new)]
    ids = _fresh_ids(n_new, plan.strategy, {r.id for r in train.records})

    def build(index: int) -> SentenceRecord:
        return augment_once(
            sources[index],
            plan.strategy,
            client=client,
            translator=translator,
            lexicon=lexicon,
            params=plan.params,
            new_id=ids[index],
            pivot=pivot,
        )

    augmented: list[SentenceRecord] = []
    try:
        if plan.strategy.uses_llm and parallelism > 1 and n_new > 1:
            with ThreadPoolExecutor(max_workers=min(parallelism, n_new)) as pool:
                futures = [pool.submit(build, i) for i in range(n_new)]
                for future in futures:
                    augmented.append(future.result())
        else:
            for i in range(n_new):
                augmented.append(build(i))
    except Exception:
        if partial_path is not None:
            partial = Dataset(split=train.split, records=train.records + tuple(augmented))
            write_dataset(partial, partial_path)
            log.error("augmentation aborted, partial output written to %s", partial_path)
        raise

    return Dataset(split=train.split, records=train.records + tuple(augmented))
