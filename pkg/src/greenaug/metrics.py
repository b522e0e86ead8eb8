"""Text-similarity metrics (ROUGE-1, ROUGE-L, greedy embedding matching)
and macro multi-label F1.

All scorers are pure functions returning precision/recall/F1 triples with
the shared convention F1 = 2PR/(P+R) when P+R > 0 and 0 otherwise.
"""

from __future__ import annotations

import random
import unicodedata
from collections import Counter
from dataclasses import dataclass
from typing import Protocol, Sequence

import numpy as np

from .errors import ConfigError, NumericError


@dataclass(frozen=True)
class ScoreTriple:
    precision: float
    recall: float
    f1: float

    @classmethod
    def from_pr(cls, precision: float, recall: float) -> "ScoreTriple":
        if precision + recall > 0:
            f1 = 2 * precision * recall / (precision + recall)
        else:
            f1 = 0.0
        return cls(precision, recall, f1)


def _strip_punct(token: str) -> str:
    start, end = 0, len(token)
    while start < end and unicodedata.category(token[start]).startswith("P"):
        start += 1
    while end > start and unicodedata.category(token[end - 1]).startswith("P"):
        end -= 1
    return token[start:end]


def tokenize(text: str) -> list[str]:
    """Lowercase, split on Unicode whitespace, strip edge punctuation."""
    tokens = []
    for raw in text.lower().split():
        tok = _strip_punct(raw)
        if tok:
            tokens.append(tok)
    return tokens


def rouge1(candidate: Sequence[str], reference: Sequence[str]) -> ScoreTriple:
    """Clipped unigram overlap: P over candidate length, R over reference length."""
    overlap = sum((Counter(candidate) & Counter(reference)).values())
    precision = overlap / len(candidate) if candidate else 0.0
    recall = overlap / len(reference) if reference else 0.0
    return ScoreTriple.from_pr(precision, recall)


def _lcs_length(a: Sequence[str], b: Sequence[str]) -> int:
    if not a or not b:
        return 0
    row = [0] * (len(b) + 1)
    for x in a:
        prev = 0
        for j, y in enumerate(b, start=1):
            cur = row[j]
            row[j] = prev + 1 if x == y else max(row[j], row[j - 1])
            prev = cur
    return row[-1]


def rougeL(candidate: Sequence[str], reference: Sequence[str]) -> ScoreTriple:
    """Longest-common-subsequence overlap, same P/R denominators as ROUGE-1."""
    lcs = _lcs_length(candidate, reference)
    precision = lcs / len(candidate) if candidate else 0.0
    recall = lcs / len(reference) if reference else 0.0
    return ScoreTriple.from_pr(precision, recall)


@dataclass(frozen=True)
class TokenEmbeddings:
    tokens: tuple[str, ...]
    vectors: np.ndarray  # shape (len(tokens), dim)

    def __post_init__(self):
        object.__setattr__(self, "tokens", tuple(self.tokens))
        vectors = np.asarray(self.vectors, dtype=float)
        if vectors.ndim != 2 or vectors.shape[0] != len(self.tokens) or not self.tokens:
            raise ConfigError("need one fixed-dimension vector per token, at least one token")
        object.__setattr__(self, "vectors", vectors)


def _unit_rows(vectors: np.ndarray, side: str) -> np.ndarray:
    norms = np.linalg.norm(vectors, axis=1, keepdims=True)
    if np.any(norms == 0):
        raise NumericError(f"zero-norm embedding vector in {side}")
    return vectors / norms


def bertscore(candidate: TokenEmbeddings, reference: TokenEmbeddings) -> ScoreTriple:
    """Greedy maximum-cosine matching between token embeddings.

    Precision averages, over candidate tokens, each token's best cosine
    against the reference; recall mirrors it over reference tokens. No IDF
    weighting and no baseline rescaling.
    """
    if candidate.vectors.shape[1] != reference.vectors.shape[1]:
        raise ConfigError("embedding dimensions do not match")
    sim = _unit_rows(candidate.vectors, "candidate") @ _unit_rows(reference.vectors, "reference").T
    precision = float(sim.max(axis=1).mean())
    recall = float(sim.max(axis=0).mean())
    return ScoreTriple.from_pr(precision, recall)


def _as_label_matrix(rows: Sequence[Sequence[int]], name: str) -> np.ndarray:
    matrix = np.asarray(rows)
    if matrix.ndim != 2:
        raise ConfigError(f"{name} must be a matrix of per-sentence binary rows")
    if matrix.size and not np.isin(matrix, (0, 1)).all():
        raise ConfigError(f"{name} entries must be 0 or 1")
    return matrix.astype(int)


def multilabel_f1(
    gold: Sequence[Sequence[int]], pred: Sequence[Sequence[int]]
) -> tuple[dict[int, ScoreTriple], float]:
    """Per-class P/R/F1 over binary label columns plus their unweighted mean.

    Classes with zero true and zero predicted positives contribute F1 = 0.
    Column i is reported under label code i + 1.
    """
    gold_m = _as_label_matrix(gold, "gold")
    pred_m = _as_label_matrix(pred, "pred")
    if gold_m.shape != pred_m.shape:
        raise ConfigError(f"shape mismatch: gold {gold_m.shape} vs pred {pred_m.shape}")
    per_class: dict[int, ScoreTriple] = {}
    for col in range(gold_m.shape[1]):
        g, p = gold_m[:, col], pred_m[:, col]
        tp = int(((g == 1) & (p == 1)).sum())
        fp = int(((g == 0) & (p == 1)).sum())
        fn = int(((g == 1) & (p == 0)).sum())
        precision = tp / (tp + fp) if tp + fp else 0.0
        recall = tp / (tp + fn) if tp + fn else 0.0
        per_class[col + 1] = ScoreTriple.from_pr(precision, recall)
    if not per_class:
        raise ConfigError("label matrices have no columns")
    macro = sum(t.f1 for t in per_class.values()) / len(per_class)
    return per_class, macro


class EmbeddingProvider(Protocol):
    def embed(self, text: str) -> TokenEmbeddings: ...


@dataclass(frozen=True)
class SimilarityAverages:
    rouge1_f: float
    rougeL_f: float
    bertscore_f: float


def sample_indices(population: int, sample_size: int, seed: int) -> list[int]:
    """Seeded uniform sample without replacement, returned in ascending order."""
    if sample_size <= 0:
        raise ConfigError("sample size must be positive")
    if sample_size > population:
        raise ConfigError(f"sample size {sample_size} exceeds population {population}")
    return sorted(random.Random(seed).sample(range(population), sample_size))


def similarity_report(
    pairs: Sequence[tuple[str, str]],
    embedding_provider: EmbeddingProvider,
    sample_size: int = 50,
    seed: int = 0,
) -> SimilarityAverages:
    """Mean ROUGE-1/ROUGE-L/embedding-match F1 over a seeded sample of
    (generated text, source text) pairs."""
    if not pairs:
        raise ConfigError("no pairs to score")
    totals = [0.0, 0.0, 0.0]
    chosen = sample_indices(len(pairs), sample_size, seed)
    for index in chosen:
        generated, source = pairs[index]
        generated_tokens, source_tokens = tokenize(generated), tokenize(source)
        totals[0] += rouge1(generated_tokens, source_tokens).f1
        totals[1] += rougeL(generated_tokens, source_tokens).f1
        totals[2] += bertscore(
            embedding_provider.embed(generated), embedding_provider.embed(source)
        ).f1
    count = len(chosen)
    return SimilarityAverages(totals[0] / count, totals[1] / count, totals[2] / count)
