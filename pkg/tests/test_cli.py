import json

import pytest

from greenaug.cli import dispatch
from greenaug.dataset import Dataset, Split, load_dataset, write_dataset
from greenaug.llm import GenerationParams, ReplayCache, cache_key
from greenaug.metrics import tokenize
from greenaug.prompts import PromptStrategy, load_lexicon, render_prompt

from conftest import make_original


@pytest.fixture()
def train_path(tmp_path):
    records = tuple(make_original(i, labels={1 + i % 3}) for i in range(10))
    path = tmp_path / "train.jsonl"
    write_dataset(Dataset(split=Split.TRAIN, records=records), path)
    return path


def run(argv, capsys):
    code = dispatch(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestUsage:
    def test_version_flag(self, capsys):
        code, out, _ = run(["--version"], capsys)
        assert code == 0
        assert "greenaug" in out

    def test_unknown_flag_exits_2(self, capsys):
        code, _, err = run(["stats", "--bogus"], capsys)
        assert code == 2
        assert "usage" in err

    def test_missing_command_exits_2(self, capsys):
        code, _, _ = run([], capsys)
        assert code == 2


class TestStats:
    def test_writes_two_csvs(self, train_path, tmp_path, capsys):
        out_dir = tmp_path / "stats"
        code, out, _ = run(
            ["stats", "--in", str(train_path), "--out-dir", str(out_dir)], capsys
        )
        assert code == 0
        assert (out_dir / "label_counts.csv").is_file()
        assert (out_dir / "cooccurrence.csv").is_file()
        assert "sentences: 10" in out

    def test_missing_input_exits_3(self, tmp_path, capsys):
        code, _, err = run(
            ["stats", "--in", str(tmp_path / "nope.jsonl"), "--out-dir", str(tmp_path)],
            capsys,
        )
        assert code == 3
        assert err.startswith("error: config:")

    def test_input_not_mutated(self, train_path, tmp_path, capsys):
        before = train_path.read_bytes()
        run(["stats", "--in", str(train_path), "--out-dir", str(tmp_path / "s")], capsys)
        assert train_path.read_bytes() == before


class TestAugment:
    def test_duplicate_end_to_end(self, train_path, tmp_path, capsys):
        out = tmp_path / "aug.jsonl"
        code, _, _ = run(
            [
                "augment",
                "--train", str(train_path),
                "--strategy", "duplicate",
                "--factor", "1.5",
                "--seed", "7",
                "--mode", "replay",
                "--cache", str(tmp_path / "unused.jsonl"),
                "--out", str(out),
            ],
            capsys,
        )
        assert code == 0
        dataset = load_dataset(out, Split.TRAIN)
        assert len(dataset) == 15

    def test_two_runs_are_byte_identical(self, train_path, tmp_path, capsys):
        outs = []
        for name in ("a.jsonl", "b.jsonl"):
            out = tmp_path / name
            code, _, _ = run(
                [
                    "augment",
                    "--train", str(train_path),
                    "--strategy", "duplicate",
                    "--factor", "2.0",
                    "--seed", "11",
                    "--mode", "replay",
                    "--cache", str(tmp_path / "unused.jsonl"),
                    "--out", str(out),
                ],
                capsys,
            )
            assert code == 0
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]

    def test_replay_miss_exits_4_and_names_the_key(self, train_path, tmp_path, capsys):
        cache_path = tmp_path / "cache.jsonl"
        cache_path.write_text("", encoding="utf-8")
        code, _, err = run(
            [
                "augment",
                "--train", str(train_path),
                "--strategy", "p_text",
                "--factor", "1.5",
                "--seed", "3",
                "--mode", "replay",
                "--cache", str(cache_path),
                "--out", str(tmp_path / "aug.jsonl"),
            ],
            capsys,
        )
        assert code == 4
        assert err.startswith("error: cache-miss:")
        # the message carries the missing key
        train = load_dataset(train_path, Split.TRAIN)
        lexicon = load_lexicon()
        params = GenerationParams(
            model_name="t-lite-instruct-0.1", endpoint_url="http://localhost:8000/v1"
        )
        possible = {
            cache_key(render_prompt(PromptStrategy.P_TEXT, r.text, r.labels, lexicon), params)
            for r in train.records
        }
        assert any(key in err for key in possible)

    def test_partial_file_on_abort(self, train_path, tmp_path, capsys):
        out = tmp_path / "aug.jsonl"
        cache_path = tmp_path / "cache.jsonl"
        cache_path.write_text("", encoding="utf-8")
        code, _, _ = run(
            [
                "augment",
                "--train", str(train_path),
                "--strategy", "p_text",
                "--factor", "1.5",
                "--seed", "3",
                "--mode", "replay",
                "--cache", str(cache_path),
                "--out", str(out),
            ],
            capsys,
        )
        assert code == 4
        assert not out.exists()
        partial = load_dataset(tmp_path / "aug.jsonl.partial", Split.TRAIN)
        assert len(partial) >= 10

    def test_config_file_supplies_model(self, train_path, tmp_path, capsys):
        config_path = tmp_path / "config.json"
        config_path.write_text(
            json.dumps({"model_name": "other-model", "seed": 5, "parallelism": 2}),
            encoding="utf-8",
        )
        out = tmp_path / "aug.jsonl"
        code, _, _ = run(
            [
                "augment",
                "--train", str(train_path),
                "--strategy", "duplicate",
                "--factor", "1.5",
                "--mode", "replay",
                "--cache", str(tmp_path / "unused.jsonl"),
                "--config", str(config_path),
                "--out", str(out),
            ],
            capsys,
        )
        assert code == 0

    def test_unknown_config_key_exits_3(self, train_path, tmp_path, capsys):
        config_path = tmp_path / "config.json"
        config_path.write_text(json.dumps({"modle_name": "typo"}), encoding="utf-8")
        code, _, err = run(
            [
                "augment",
                "--train", str(train_path),
                "--strategy", "duplicate",
                "--factor", "1.5",
                "--mode", "replay",
                "--cache", str(tmp_path / "c.jsonl"),
                "--config", str(config_path),
                "--out", str(tmp_path / "o.jsonl"),
            ],
            capsys,
        )
        assert code == 3
        assert "modle_name" in err


class TestSimilarity:
    def test_fixture_embeddings_end_to_end(self, train_path, tmp_path, capsys):
        aug_out = tmp_path / "aug.jsonl"
        run(
            [
                "augment",
                "--train", str(train_path),
                "--strategy", "duplicate",
                "--factor", "1.5",
                "--seed", "2",
                "--mode", "replay",
                "--cache", str(tmp_path / "unused.jsonl"),
                "--out", str(aug_out),
            ],
            capsys,
        )
        dataset = load_dataset(aug_out, Split.TRAIN)
        fixture = tmp_path / "embeddings.jsonl"
        with fixture.open("w", encoding="utf-8") as handle:
            for text in {r.text for r in dataset.records}:
                tokens = tokenize(text)
                entry = {
                    "text": text,
                    "tokens": tokens,
                    "vectors": [[1.0 * (i + 1), 0.5] for i in range(len(tokens))],
                }
                handle.write(json.dumps(entry, ensure_ascii=False) + "\n")
        report_path = tmp_path / "similarity.csv"
        code, _, _ = run(
            [
                "similarity",
                "--in", str(aug_out),
                "--embeddings", str(fixture),
                "--sample", "5",
                "--seed", "1",
                "--out", str(report_path),
            ],
            capsys,
        )
        assert code == 0
        lines = report_path.read_text(encoding="utf-8").splitlines()
        assert lines[0] == "strategy,rouge1,rougeL,bertscore"
        # duplicates are identical to their sources, so all scores are 100%
        assert lines[1] == "duplicate,100.00,100.00,100.00"

    def test_sample_larger_than_pairs_exits_3(self, train_path, tmp_path, capsys):
        aug_out = tmp_path / "aug.jsonl"
        run(
            [
                "augment",
                "--train", str(train_path),
                "--strategy", "duplicate",
                "--factor", "1.5",
                "--seed", "2",
                "--mode", "replay",
                "--cache", str(tmp_path / "unused.jsonl"),
                "--out", str(aug_out),
            ],
            capsys,
        )
        code, _, err = run(
            [
                "similarity",
                "--in", str(aug_out),
                "--embeddings", str(tmp_path / "none.jsonl"),
                "--sample", "500",
            ],
            capsys,
        )
        assert code == 3


class TestEvaluate:
    def make_test_set(self, tmp_path):
        records = tuple(make_original(i, labels={1 + i % 2}) for i in range(6))
        path = tmp_path / "test.jsonl"
        write_dataset(Dataset(split=Split.TEST, records=records), path)
        return path, records

    def test_perfect_predictions(self, tmp_path, capsys):
        test_path, records = self.make_test_set(tmp_path)
        pred_path = tmp_path / "pred.jsonl"
        with pred_path.open("w", encoding="utf-8") as handle:
            for rec in records:
                handle.write(json.dumps({"id": rec.id, "labels": sorted(rec.labels)}) + "\n")
        score_path = tmp_path / "score.json"
        code, out, _ = run(
            [
                "evaluate",
                "--test", str(test_path),
                "--pred", str(pred_path),
                "--label", "m/original/1.0",
                "--out-score", str(score_path),
            ],
            capsys,
        )
        assert code == 0
        # labels 1 and 2 are predicted perfectly, the other seven are absent
        assert "macro_f1: 0.2222" in out
        score = json.loads(score_path.read_text(encoding="utf-8"))
        assert score["config"] == "m/original/1.0"
        assert score["f1_percent"] == pytest.approx(100 * 2 / 9)

    def test_id_mismatch_exits_3(self, tmp_path, capsys):
        test_path, records = self.make_test_set(tmp_path)
        pred_path = tmp_path / "pred.jsonl"
        with pred_path.open("w", encoding="utf-8") as handle:
            handle.write(json.dumps({"id": "stranger", "labels": [1]}) + "\n")
        code, _, err = run(
            ["evaluate", "--test", str(test_path), "--pred", str(pred_path)], capsys
        )
        assert code == 3
        assert err.startswith("error: integrity:")

    def test_bad_label_code_exits_3(self, tmp_path, capsys):
        test_path, records = self.make_test_set(tmp_path)
        pred_path = tmp_path / "pred.jsonl"
        with pred_path.open("w", encoding="utf-8") as handle:
            for rec in records:
                handle.write(json.dumps({"id": rec.id, "labels": [12]}) + "\n")
        code, _, err = run(
            ["evaluate", "--test", str(test_path), "--pred", str(pred_path)], capsys
        )
        assert code == 3
        assert err.startswith("error: schema:")

    def test_out_score_requires_label(self, tmp_path, capsys):
        test_path, records = self.make_test_set(tmp_path)
        pred_path = tmp_path / "pred.jsonl"
        with pred_path.open("w", encoding="utf-8") as handle:
            for rec in records:
                handle.write(json.dumps({"id": rec.id, "labels": []}) + "\n")
        code, _, err = run(
            [
                "evaluate",
                "--test", str(test_path),
                "--pred", str(pred_path),
                "--out-score", str(tmp_path / "s.json"),
            ],
            capsys,
        )
        assert code == 3


class TestReport:
    def test_aggregates_run_scores(self, tmp_path, capsys):
        runs = tmp_path / "runs"
        runs.mkdir()
        scores = [
            ("m/original/1.0", 58.16),
            ("m/p_text_topics/2.0", 70.17),
            ("m/p_text_topics/2.0", 73.39),
        ]
        for i, (config, value) in enumerate(scores):
            (runs / f"run{i}.json").write_text(
                json.dumps({"config": config, "f1_percent": value}), encoding="utf-8"
            )
        code, out, _ = run(
            [
                "report",
                "--runs", str(runs),
                "--baseline", "m/original/1.0",
                "--format", "csv",
            ],
            capsys,
        )
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "config,f1,growth_pct"
        assert lines[1] == "m/original/1.0,58.16±0.00,"
        assert lines[2].startswith("m/p_text_topics/2.0,71.78±2.28,23.42")

    def test_missing_runs_dir_exits_3(self, tmp_path, capsys):
        code, _, _ = run(["report", "--runs", str(tmp_path / "none")], capsys)
        assert code == 3
