"""Prompt-based augmentation and evaluation toolkit for imbalanced
multi-label text corpora."""

__version__ = "0.1.0"

from .dataset import (
    Dataset,
    LabelStats,
    LABEL_CODES,
    LABEL_NAMES,
    Origin,
    SentenceRecord,
    Split,
    compute_stats,
    load_dataset,
    write_dataset,
)
from .errors import (
    CacheMissError,
    ConfigError,
    GenerationError,
    IntegrityError,
    NumericError,
    ParseError,
    SchemaError,
    ToolkitError,
    TransportError,
)
from .llm import CacheMode, GenerationParams, LLMClient, ReplayCache, cache_key
from .metrics import (
    ScoreTriple,
    TokenEmbeddings,
    bertscore,
    multilabel_f1,
    rouge1,
    rougeL,
    similarity_report,
    tokenize,
)
from .prompts import PromptStrategy, load_lexicon, render_prompt, topics_phrase
from .report import RunReport, aggregate_runs, growth, render_tables
from .sampler import SamplingPlan, augment_once, back_translate, run_plan, select_source

__all__ = [
    "__version__",
    "Dataset",
    "LabelStats",
    "LABEL_CODES",
    "LABEL_NAMES",
    "Origin",
    "SentenceRecord",
    "Split",
    "compute_stats",
    "load_dataset",
    "write_dataset",
    "CacheMissError",
    "ConfigError",
    "GenerationError",
    "IntegrityError",
    "NumericError",
    "ParseError",
    "SchemaError",
    "ToolkitError",
    "TransportError",
    "CacheMode",
    "GenerationParams",
    "LLMClient",
    "ReplayCache",
    "cache_key",
    "ScoreTriple",
    "TokenEmbeddings",
    "bertscore",
    "multilabel_f1",
    "rouge1",
    "rougeL",
    "similarity_report",
    "tokenize",
    "PromptStrategy",
    "load_lexicon",
    "render_prompt",
    "topics_phrase",
    "RunReport",
    "aggregate_runs",
    "growth",
    "render_tables",
    "SamplingPlan",
    "augment_once",
    "back_translate",
    "run_plan",
    "select_source",
]
