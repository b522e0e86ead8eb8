"""Command-line entry point: stats, augment, similarity, evaluate, report.

Exit codes: 0 success, 2 usage, 3 validation (parse/schema/integrity/config),
4 transport (network, cache miss, generation). Errors print one line to
stderr as "error: <category>: <message>".
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .config import AppConfig, load_config
from .dataset import (
    LABEL_NAMES,
    Split,
    compute_stats,
    load_dataset,
    write_cooccurrence_csv,
    write_dataset,
    write_label_counts_csv,
)
from .embeddings import FixtureEmbeddings, HttpEmbeddings
from .errors import (
    ConfigError,
    IntegrityError,
    SchemaError,
    ToolkitError,
    TRANSPORT_CATEGORIES,
)
from .llm import CacheMode, GenerationParams, LLMClient, ReplayCache
from .metrics import multilabel_f1, similarity_report
from .prompts import PromptStrategy, load_lexicon
from .report import build_reports, load_run_scores, render_tables
from .sampler import SamplingPlan, run_plan
from .translate import HttpTranslator, open_translation_cache

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_VALIDATION = 3
EXIT_TRANSPORT = 4


def _require_file(path: str, what: str) -> Path:
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"{what} {path} does not exist")
    return p


def _fmt_mean_std(ms) -> str:
    return f"{ms.mean:.2f}±{ms.std:.2f}"


def cmd_stats(args: argparse.Namespace) -> int:
    dataset = load_dataset(_require_file(args.infile, "dataset"), Split(args.split))
    stats = compute_stats(dataset)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_label_counts_csv(stats, out_dir / "label_counts.csv")
    write_cooccurrence_csv(stats, out_dir / "cooccurrence.csv")
    print(f"sentences: {stats.sentence_count}")
    print(f"posts: {stats.post_count}")
    print(f"avg chars per sentence: {_fmt_mean_std(stats.avg_chars_per_sentence)}")
    print(f"avg chars per post: {_fmt_mean_std(stats.avg_chars_per_post)}")
    for code, count in sorted(stats.mentions_per_label.items()):
        print(f"label {code} ({LABEL_NAMES[code]}): {count}")
    return EXIT_OK


def _build_clients(args, config: AppConfig, strategy: PromptStrategy):
    mode = CacheMode(args.mode)
    client = None
    translator = None
    if strategy.uses_llm:
        cache_path = args.cache or config.cache_path
        cache = None if mode is CacheMode.LIVE else ReplayCache(cache_path)
        client = LLMClient(cache=cache, mode=mode)
    elif strategy is PromptStrategy.BACK_TRANSLATE:
        cache_path = (
            args.translator_cache
            or config.translator_cache_path
            or str(args.cache or config.cache_path) + ".translations"
        )
        cache = None if mode is CacheMode.LIVE else open_translation_cache(cache_path)
        translator = HttpTranslator(config.translator_url, cache=cache, mode=mode)
    return client, translator


def cmd_augment(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    strategy = PromptStrategy(args.strategy)
    train = load_dataset(_require_file(args.train, "training set"), Split.TRAIN)
    params = GenerationParams(
        model_name=config.model_name,
        endpoint_url=config.endpoint_url,
    )
    plan = SamplingPlan(
        strategy=strategy,
        growth_factor=args.factor,
        seed=args.seed if args.seed is not None else config.seed,
        params=params if strategy.uses_llm else None,
    )
    lexicon = load_lexicon(args.lexicon or config.lexicon_path)
    client, translator = _build_clients(args, config, strategy)
    out_path = Path(args.out)
    augmented = run_plan(
        plan,
        train,
        client=client,
        translator=translator,
        lexicon=lexicon,
        parallelism=args.parallelism or config.parallelism,
        pivot=args.pivot,
        partial_path=Path(str(out_path) + ".partial"),
    )
    write_dataset(augmented, out_path)
    print(f"wrote {len(augmented)} records to {out_path}")
    return EXIT_OK


def cmd_similarity(args: argparse.Namespace) -> int:
    dataset = load_dataset(_require_file(args.infile, "dataset"), Split.TRAIN)
    provider = (
        HttpEmbeddings(args.embeddings)
        if args.embeddings.startswith(("http://", "https://"))
        else FixtureEmbeddings(_require_file(args.embeddings, "embedding fixture"))
    )
    pairs_by_strategy: dict[str, list[tuple[str, str]]] = {}
    for rec in dataset.records:
        if rec.is_original:
            continue
        source = dataset.record_by_id(rec.origin.source_id)
        pairs_by_strategy.setdefault(rec.origin.strategy, []).append((rec.text, source.text))
    if not pairs_by_strategy:
        raise ConfigError("dataset contains no augmented records to score")
    lines = ["strategy,rouge1,rougeL,bertscore"]
    for strategy in sorted(pairs_by_strategy):
        pairs = pairs_by_strategy[strategy]
        averages = similarity_report(
            pairs, provider, sample_size=min(args.sample, len(pairs)) if args.clip else args.sample,
            seed=args.seed,
        )
        lines.append(
            f"{strategy},{100 * averages.rouge1_f:.2f},{100 * averages.rougeL_f:.2f},"
            f"{100 * averages.bertscore_f:.2f}"
        )
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8", newline="\n")
    else:
        print(text, end="")
    return EXIT_OK


def _load_predictions(path: Path) -> dict[str, list[int]]:
    predictions: dict[str, list[int]] = {}
    with path.open("r", encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                record_id, labels = obj["id"], obj["labels"]
            except (json.JSONDecodeError, KeyError, TypeError):
                raise SchemaError(f"{path}:{lineno}: expected {{'id', 'labels'}}") from None
            if not isinstance(labels, list) or not all(
                isinstance(code, int) and not isinstance(code, bool) and code in LABEL_NAMES
                for code in labels
            ):
                raise SchemaError(f"{path}:{lineno}: labels must be codes 1..9")
            if record_id in predictions:
                raise IntegrityError(f"{path}:{lineno}: duplicate prediction id {record_id!r}")
            predictions[record_id] = labels
    return predictions


def cmd_evaluate(args: argparse.Namespace) -> int:
    test = load_dataset(_require_file(args.test, "test set"), Split.TEST)
    predictions = _load_predictions(_require_file(args.pred, "prediction file"))
    test_ids = [rec.id for rec in test.records]
    missing = [i for i in test_ids if i not in predictions]
    extra = sorted(set(predictions) - set(test_ids))
    if missing or extra:
        raise IntegrityError(
            f"prediction ids do not match the test set (missing {len(missing)}, extra {len(extra)})"
        )
    gold = [[1 if code in rec.labels else 0 for code in sorted(LABEL_NAMES)] for rec in test.records]
    pred = [
        [1 if code in predictions[rec.id] else 0 for code in sorted(LABEL_NAMES)]
        for rec in test.records
    ]
    per_class, macro = multilabel_f1(gold, pred)
    for code, triple in sorted(per_class.items()):
        print(
            f"label {code} ({LABEL_NAMES[code]}): P={triple.precision:.4f} "
            f"R={triple.recall:.4f} F1={triple.f1:.4f}"
        )
    print(f"macro_f1: {macro:.4f}")
    if args.out_score:
        if not args.label:
            raise ConfigError("--out-score needs a --label config name")
        payload = {"config": args.label, "f1_percent": 100.0 * macro}
        Path(args.out_score).write_text(
            json.dumps(payload, ensure_ascii=False) + "\n", encoding="utf-8", newline="\n"
        )
    return EXIT_OK


def cmd_report(args: argparse.Namespace) -> int:
    runs_dir = Path(args.runs)
    if not runs_dir.is_dir():
        raise ConfigError(f"runs directory {runs_dir} does not exist")
    reports = build_reports(load_run_scores(runs_dir), baseline=args.baseline)
    text = render_tables(reports, fmt=args.format)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8", newline="\n")
    else:
        print(text, end="")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="greenaug",
        description="Augment and evaluate multi-label green-practice text datasets.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_stats = sub.add_parser("stats", help="dataset statistics and co-occurrence CSVs")
    p_stats.add_argument("--in", dest="infile", required=True)
    p_stats.add_argument("--out-dir", required=True)
    p_stats.add_argument("--split", choices=[s.value for s in Split], default="train")
    p_stats.set_defaults(func=cmd_stats)

    p_aug = sub.add_parser("augment", help="grow a training set with one strategy")
    p_aug.add_argument("--train", required=True)
    p_aug.add_argument(
        "--strategy", required=True, choices=[s.value for s in PromptStrategy]
    )
    p_aug.add_argument("--factor", type=float, required=True)
    p_aug.add_argument("--seed", type=int, default=None)
    p_aug.add_argument("--cache", default=None)
    p_aug.add_argument("--mode", choices=[m.value for m in CacheMode], default="replay")
    p_aug.add_argument("--out", required=True)
    p_aug.add_argument("--config", default=None)
    p_aug.add_argument("--lexicon", default=None)
    p_aug.add_argument("--pivot", default="en", help="pivot language for back translation")
    p_aug.add_argument("--translator-cache", default=None)
    p_aug.add_argument("--parallelism", type=int, default=None)
    p_aug.set_defaults(func=cmd_augment)

    p_sim = sub.add_parser("similarity", help="ROUGE/embedding similarity of augmented text")
    p_sim.add_argument("--in", dest="infile", required=True)
    p_sim.add_argument("--embeddings", required=True, help="fixture file or HTTP endpoint")
    p_sim.add_argument("--sample", type=int, default=50)
    p_sim.add_argument("--seed", type=int, default=0)
    p_sim.add_argument("--clip", action="store_true",
                       help="clip the sample size to the pair count instead of failing")
    p_sim.add_argument("--out", default=None)
    p_sim.set_defaults(func=cmd_similarity)

    p_eval = sub.add_parser("evaluate", help="macro multi-label F1 of a prediction file")
    p_eval.add_argument("--test", required=True)
    p_eval.add_argument("--pred", required=True)
    p_eval.add_argument("--label", default=None, help="config label for the score file")
    p_eval.add_argument("--out-score", default=None)
    p_eval.set_defaults(func=cmd_evaluate)

    p_rep = sub.add_parser("report", help="aggregate run scores into a table")
    p_rep.add_argument("--runs", required=True)
    p_rep.add_argument("--baseline", default=None)
    p_rep.add_argument("--format", choices=["markdown", "csv"], default="markdown")
    p_rep.add_argument("--out", default=None)
    p_rep.set_defaults(func=cmd_report)

    return parser


def dispatch(argv: list[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ToolkitError as exc:
        print(f"error: {exc.category}: {exc}", file=sys.stderr)
        return EXIT_TRANSPORT if exc.category in TRANSPORT_CATEGORIES else EXIT_VALIDATION
    except OSError as exc:
        print(f"error: io: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))
