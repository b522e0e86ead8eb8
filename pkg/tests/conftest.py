from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from greenaug.dataset import Dataset, Origin, SentenceRecord, Split
from greenaug.llm import GenerationParams
from greenaug.prompts import load_lexicon

from ru_examples import FIXTURE_MODEL_NAME

FIXTURES_DIR = Path(__file__).parent / "fixtures"


def make_original(
    index: int,
    labels=(),
    text: str | None = None,
    post_id: str | None = None,
) -> SentenceRecord:
    return SentenceRecord(
        id=f"s{index:04d}",
        post_id=post_id if post_id is not None else f"p{index // 3:04d}",
        text=text if text is not None else f"Предложение номер {index} про зелёные практики.",
        labels=frozenset(labels),
    )


def make_augmented(
    record_id: str, source: SentenceRecord, strategy: str, text: str | None = None
) -> SentenceRecord:
    return SentenceRecord(
        id=record_id,
        post_id=source.post_id,
        text=text if text is not None else source.text,
        labels=source.labels,
        origin=Origin(kind="augmented", strategy=strategy, source_id=source.id),
    )


def build_blocked_dataset(
    label_counts: dict[int, int],
    n_sentences: int,
    n_posts: int,
    split: Split = Split.TRAIN,
) -> Dataset:
    """Deterministic dataset whose per-label mention counts match
    ``label_counts`` exactly.

    Label blocks are laid out sequentially over sentence indices modulo the
    sentence count, so each label's count may exceed no single wraparound and
    no sentence receives the same label twice.
    """
    total = sum(label_counts.values())
    if any(count > n_sentences for count in label_counts.values()):
        raise ValueError("a label count exceeds the sentence count")
    if total > 2 * n_sentences:
        raise ValueError("label blocks would wrap more than once")
    labels_per_sentence: list[set[int]] = [set() for _ in range(n_sentences)]
    position = 0
    for code in sorted(label_counts):
        for _ in range(label_counts[code]):
            labels_per_sentence[position % n_sentences].add(code)
            position += 1
    records = [
        SentenceRecord(
            id=f"s{i:05d}",
            post_id=f"p{i % n_posts:04d}",
            text=f"Предложение номер {i} о повседневных зелёных практиках жителей города.",
            labels=frozenset(labels_per_sentence[i]),
        )
        for i in range(n_sentences)
    ]
    return Dataset(split=split, records=tuple(records))


@pytest.fixture(scope="session")
def lexicon():
    return load_lexicon()


@pytest.fixture(scope="session")
def fixture_params() -> GenerationParams:
    return GenerationParams(
        model_name=FIXTURE_MODEL_NAME, endpoint_url="http://localhost:8000/v1"
    )


@pytest.fixture(scope="session")
def recorded_cache_path() -> Path:
    return FIXTURES_DIR / "recorded_completions.jsonl"
