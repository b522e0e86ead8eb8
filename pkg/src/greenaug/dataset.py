"""Multi-label sentence datasets in the GreenRu line-delimited JSON schema.

A dataset is an ordered list of sentence records. Each record carries a
unique id, the id of the social-media post it came from, the sentence text,
a (possibly empty) set of label codes 1..9, and provenance: either an
original sentence or one produced by an augmentation strategy from a named
source record.
"""

from __future__ import annotations

import json
import statistics
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from .errors import IntegrityError, ParseError, SchemaError

LABEL_NAMES: dict[int, str] = {
    1: "waste sorting",
    2: "studying the product labeling",
    3: "waste recycling",
    4: "signing petitions",
    5: "refusing purchases",
    6: "exchanging",
    7: "sharing",
    8: "participating in actions to promote responsible consumption",
    9: "repairing",
}
LABEL_CODES: tuple[int, ...] = tuple(sorted(LABEL_NAMES))
NUM_LABELS = len(LABEL_CODES)

ORIGIN_ORIGINAL = "original"
ORIGIN_AUGMENTED = "augmented"


class Split(Enum):
    TRAIN = "train"
    TEST = "test"


@dataclass(frozen=True)
class Origin:
    kind: str
    strategy: str | None = None
    source_id: str | None = None

    def __post_init__(self):
        if self.kind == ORIGIN_ORIGINAL:
            if self.strategy is not None or self.source_id is not None:
                raise SchemaError("original records carry no strategy/source_id")
        elif self.kind == ORIGIN_AUGMENTED:
            if not self.strategy or not self.source_id:
                raise SchemaError("augmented records need a strategy and a source_id")
        else:
            raise SchemaError(f"unknown origin kind {self.kind!r}")

    def to_json(self) -> dict:
        if self.kind == ORIGIN_ORIGINAL:
            return {"kind": ORIGIN_ORIGINAL}
        return {"kind": ORIGIN_AUGMENTED, "strategy": self.strategy, "source_id": self.source_id}


ORIGINAL = Origin(kind=ORIGIN_ORIGINAL)


@dataclass(frozen=True)
class SentenceRecord:
    id: str
    post_id: str
    text: str
    labels: frozenset[int]
    origin: Origin = ORIGINAL

    def __post_init__(self):
        if not self.id or not isinstance(self.id, str):
            raise SchemaError("record id must be a non-empty string")
        if not isinstance(self.post_id, str):
            raise SchemaError(f"record {self.id}: post_id must be a string")
        if not self.text or not isinstance(self.text, str):
            raise SchemaError(f"record {self.id}: text must be a non-empty string")
        object.__setattr__(self, "labels", frozenset(self.labels))
        for code in self.labels:
            if isinstance(code, bool) or not isinstance(code, int) or code not in LABEL_NAMES:
                raise SchemaError(f"record {self.id}: unknown label code {code!r}")

    @property
    def is_original(self) -> bool:
        return self.origin.kind == ORIGIN_ORIGINAL

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "post_id": self.post_id,
            "text": self.text,
            "labels": sorted(self.labels),
            "origin": self.origin.to_json(),
        }


@dataclass(frozen=True)
class Dataset:
    """Immutable, ordered record collection. Mutate by building a new one."""

    split: Split
    records: tuple[SentenceRecord, ...]

    def __post_init__(self):
        object.__setattr__(self, "records", tuple(self.records))
        _check_integrity(self.records)

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def record_by_id(self, record_id: str) -> SentenceRecord:
        try:
            return self._by_id[record_id]
        except KeyError:
            raise IntegrityError(f"no record with id {record_id!r}") from None

    @property
    def _by_id(self) -> dict[str, SentenceRecord]:
        # Built lazily; the instance is frozen so the index never goes stale.
        index = self.__dict__.get("_by_id_cache")
        if index is None:
            index = {r.id: r for r in self.records}
            self.__dict__["_by_id_cache"] = index
        return index


def _check_integrity(records: tuple[SentenceRecord, ...]) -> None:
    seen: set[str] = set()
    originals: dict[str, SentenceRecord] = {}
    for rec in records:
        if rec.id in seen:
            raise IntegrityError(f"duplicate record id {rec.id!r}")
        seen.add(rec.id)
        if rec.is_original:
            originals[rec.id] = rec
    for rec in records:
        if rec.is_original:
            continue
        src = originals.get(rec.origin.source_id)
        if src is None:
            raise IntegrityError(
                f"augmented record {rec.id!r} references missing original {rec.origin.source_id!r}"
            )
        if src.labels != rec.labels:
            raise IntegrityError(
                f"augmented record {rec.id!r} does not inherit the labels of {src.id!r}"
            )


def _record_from_json(obj: dict, where: str) -> SentenceRecord:
    if not isinstance(obj, dict):
        raise SchemaError(f"{where}: record must be a JSON object")
    for key in ("id", "post_id", "text", "labels", "origin"):
        if key not in obj:
            raise SchemaError(f"{where}: missing field {key!r}")
    labels = obj["labels"]
    if not isinstance(labels, list):
        raise SchemaError(f"{where}: labels must be a list")
    origin_obj = obj["origin"]
    if not isinstance(origin_obj, dict) or "kind" not in origin_obj:
        raise SchemaError(f"{where}: origin must be an object with a 'kind'")
    try:
        if origin_obj["kind"] == ORIGIN_ORIGINAL:
            origin = ORIGINAL
        else:
            origin = Origin(
                kind=origin_obj["kind"],
                strategy=origin_obj.get("strategy"),
                source_id=origin_obj.get("source_id"),
            )
        return SentenceRecord(
            id=obj["id"],
            post_id=obj["post_id"],
            text=obj["text"],
            labels=frozenset(labels),
            origin=origin,
        )
    except SchemaError as exc:
        raise SchemaError(f"{where}: {exc}") from None


def load_dataset(path: str | Path, split: Split) -> Dataset:
    """Load a line-delimited JSON dataset, keeping file order.

    Raises ParseError (malformed JSON, with line number), SchemaError
    (bad field types or unknown label codes) or IntegrityError (duplicate
    ids, dangling or label-mismatched augmentation sources).
    """
    path = Path(path)
    records: list[SentenceRecord] = []
    with path.open("r", encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            where = f"{path}:{lineno}"
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"{where}: malformed JSON ({exc.msg})") from None
            records.append(_record_from_json(obj, where))
    return Dataset(split=split, records=tuple(records))


def write_dataset(dataset: Dataset, path: str | Path) -> None:
    """Write one JSON object per line, UTF-8, byte-stable field order."""
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="\n") as handle:
        for rec in dataset.records:
            handle.write(json.dumps(rec.to_json(), ensure_ascii=False))
            handle.write("\n")


@dataclass(frozen=True)
class MeanStd:
    mean: float
    std: float


@dataclass(frozen=True)
class LabelStats:
    """Corpus summary: counts per label plus a symmetric co-occurrence matrix.

    ``cooccurrence[i][j]`` counts sentences carrying both code i+1 and code
    j+1; the diagonal therefore equals the per-label mention counts.
    Character counts are Unicode code points, not bytes. The deviations are
    population standard deviations.
    """

    sentence_count: int
    post_count: int
    mentions_per_label: dict[int, int]
    avg_chars_per_sentence: MeanStd
    avg_chars_per_post: MeanStd
    cooccurrence: tuple[tuple[int, ...], ...]


def _mean_std(values: list[int]) -> MeanStd:
    if not values:
        return MeanStd(0.0, 0.0)
    return MeanStd(statistics.fmean(values), statistics.pstdev(values))


def compute_stats(dataset: Dataset) -> LabelStats:
    """Count label mentions, pairwise co-occurrence and size statistics.

    A sentence with k labels contributes one mention to each of the k
    labels; unlabeled sentences count toward sizes only. Post lengths are
    the summed character counts of the post's sentences (grouped by
    post_id).
    """
    mentions = {code: 0 for code in LABEL_CODES}
    matrix = [[0] * NUM_LABELS for _ in range(NUM_LABELS)]
    post_chars: dict[str, int] = {}
    sentence_chars: list[int] = []
    for rec in dataset.records:
        sentence_chars.append(len(rec.text))
        post_chars[rec.post_id] = post_chars.get(rec.post_id, 0) + len(rec.text)
        codes = sorted(rec.labels)
        for i, a in enumerate(codes):
            mentions[a] += 1
            matrix[a - 1][a - 1] += 1
            for b in codes[i + 1 :]:
                matrix[a - 1][b - 1] += 1
                matrix[b - 1][a - 1] += 1
    return LabelStats(
        sentence_count=len(dataset.records),
        post_count=len(post_chars),
        mentions_per_label=mentions,
        avg_chars_per_sentence=_mean_std(sentence_chars),
        avg_chars_per_post=_mean_std(list(post_chars.values())),
        cooccurrence=tuple(tuple(row) for row in matrix),
    )


def write_label_counts_csv(stats: LabelStats, path: str | Path) -> None:
    lines = ["code,name,mentions"]
    for code in LABEL_CODES:
        lines.append(f"{code},{LABEL_NAMES[code]},{stats.mentions_per_label[code]}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def write_cooccurrence_csv(stats: LabelStats, path: str | Path) -> None:
    lines = [",".join(str(v) for v in row) for row in stats.cooccurrence]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")
