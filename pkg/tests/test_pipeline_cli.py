"""End-to-end pipeline runs and the command-line surface."""

import json

import pytest

from doswatch.cli import main
from doswatch.evaluation import SynthSpec, generate_synthetic
from doswatch.pipeline import PipelineConfig, PipelineError, run_detect, run_eval, run_sweep

FAST = dict(iterations=120, inference_iterations=30, seed=5)


def write_jsonl(path, tweets, labeled=True):
    with path.open("w", encoding="utf-8") as fh:
        for t in tweets:
            record = {"id": t.id, "text": t.raw_text}
            if labeled and t.label.value != "unlabeled":
                record["label"] = t.label.value
            fh.write(json.dumps(record) + "\n")


@pytest.fixture(scope="module")
def corpus_files(tmp_path_factory):
    root = tmp_path_factory.mktemp("corpora")
    baseline, event = generate_synthetic(SynthSpec(60, 15, 30, 8, 8, 0.2, seed=21))
    write_jsonl(root / "baseline.jsonl", baseline, labeled=False)
    write_jsonl(root / "event.jsonl", event)
    tree_train = generate_synthetic(SynthSpec(60, 15, 30, 8, 8, 0.2, seed=22))[1]
    write_jsonl(root / "tree_train.jsonl", tree_train)
    return root


class TestRunDetect:
    def test_artifacts_written(self, corpus_files, tmp_path):
        config = PipelineConfig(
            baseline_path=str(corpus_files / "baseline.jsonl"),
            event_path=str(corpus_files / "event.jsonl"),
            out_dir=str(tmp_path / "out"),
            **FAST,
        )
        artifacts = run_detect(config)
        for name in ("model_baseline", "model_event", "topics",
                     "ranked_tweets", "severity"):
            assert artifacts[name].exists(), name
        ranked = artifacts["ranked_tweets"].read_text().splitlines()
        assert ranked[0] == "rank,score,id,text"
        assert len(ranked) == 76  # header + 75 event tweets
        severity = json.loads(artifacts["severity"].read_text())
        assert severity["n_attack"] == 40  # default top_x
        assert severity["n_all"] == 75

    def test_reruns_byte_identical(self, corpus_files, tmp_path):
        def run(out):
            config = PipelineConfig(
                baseline_path=str(corpus_files / "baseline.jsonl"),
                event_path=str(corpus_files / "event.jsonl"),
                out_dir=str(out),
                **FAST,
            )
            return run_detect(config)

        first = run(tmp_path / "a")
        second = run(tmp_path / "b")
        assert first.keys() == second.keys()
        for name in first:
            assert first[name].read_bytes() == second[name].read_bytes(), name

    def test_top_x_zero_gives_zero_severity(self, corpus_files, tmp_path):
        config = PipelineConfig(
            baseline_path=str(corpus_files / "baseline.jsonl"),
            event_path=str(corpus_files / "event.jsonl"),
            out_dir=str(tmp_path / "out"),
            top_x=0,
            **FAST,
        )
        severity = json.loads(run_detect(config)["severity"].read_text())
        assert severity["n_attack"] == 0
        assert severity["severity_level"] == 0.0
        assert severity["attack_ids"] == []

    def test_score_threshold_labeling(self, corpus_files, tmp_path):
        config = PipelineConfig(
            baseline_path=str(corpus_files / "baseline.jsonl"),
            event_path=str(corpus_files / "event.jsonl"),
            out_dir=str(tmp_path / "out"),
            score_threshold=1e9,
            **FAST,
        )
        severity = json.loads(run_detect(config)["severity"].read_text())
        assert severity["n_attack"] == 0

    def test_both_labeling_modes_rejected(self, corpus_files, tmp_path):
        config = PipelineConfig(
            baseline_path=str(corpus_files / "baseline.jsonl"),
            event_path=str(corpus_files / "event.jsonl"),
            out_dir=str(tmp_path / "out"),
            top_x=10,
            score_threshold=0.5,
            **FAST,
        )
        with pytest.raises(PipelineError, match=r"\[scoring\]"):
            run_detect(config)

    def test_missing_baseline_is_stage_tagged(self, corpus_files, tmp_path):
        config = PipelineConfig(
            baseline_path=str(corpus_files / "nope.jsonl"),
            event_path=str(corpus_files / "event.jsonl"),
            out_dir=str(tmp_path / "out"),
            **FAST,
        )
        with pytest.raises(PipelineError, match=r"\[corpus\]"):
            run_detect(config)

    def test_tree_filter_path(self, corpus_files, tmp_path):
        tree_file = tmp_path / "tree.json"
        assert main(["train-tree", str(corpus_files / "tree_train.jsonl"),
                     "-o", str(tree_file)]) == 0
        config = PipelineConfig(
            baseline_path=str(corpus_files / "baseline.jsonl"),
            event_path=str(corpus_files / "event.jsonl"),
            out_dir=str(tmp_path / "out"),
            use_tree=True,
            tree_file=str(tree_file),
            **FAST,
        )
        artifacts = run_detect(config)
        assert artifacts["filtered_tweets"].exists()
        filtered = artifacts["filtered_tweets"].read_text().splitlines()
        ranked = artifacts["ranked_tweets"].read_text().splitlines()
        assert len(filtered) <= len(ranked)

    def test_use_tree_without_file_rejected(self, corpus_files, tmp_path):
        config = PipelineConfig(
            baseline_path=str(corpus_files / "baseline.jsonl"),
            event_path=str(corpus_files / "event.jsonl"),
            out_dir=str(tmp_path / "out"),
            use_tree=True,
            **FAST,
        )
        with pytest.raises(PipelineError, match=r"\[classifier\]"):
            run_detect(config)


class TestRunEval:
    def test_curve_and_det_files(self, corpus_files, tmp_path):
        config = PipelineConfig(
            baseline_path=str(corpus_files / "baseline.jsonl"),
            event_path=str(corpus_files / "event.jsonl"),
            out_dir=str(tmp_path / "out"),
            max_x=50,
            **FAST,
        )
        artifacts = run_eval(config)
        curve = artifacts["curve"].read_text().splitlines()
        assert curve[0] == "x,precision,recall"
        assert len(curve) == 51
        det = artifacts["det"].read_text().splitlines()
        assert det[0] == "x,missed_detection_rate,false_positive_measure"
        assert len(det) == 51

    def test_unlabeled_event_rejected(self, corpus_files, tmp_path):
        config = PipelineConfig(
            baseline_path=str(corpus_files / "baseline.jsonl"),
            event_path=str(corpus_files / "baseline.jsonl"),
            out_dir=str(tmp_path / "out"),
            **FAST,
        )
        with pytest.raises(PipelineError, match=r"\[eval\]"):
            run_eval(config)

    def test_empty_grid_rejected(self, corpus_files, tmp_path):
        config = PipelineConfig(
            baseline_path=str(corpus_files / "baseline.jsonl"),
            event_path=str(corpus_files / "event.jsonl"),
            out_dir=str(tmp_path / "out"),
            max_x=0,
            **FAST,
        )
        with pytest.raises(PipelineError, match="empty evaluation grid"):
            run_eval(config)

    def test_tree_filter_shrinks_grid(self, corpus_files, tmp_path):
        tree_file = tmp_path / "tree.json"
        assert main(["train-tree", str(corpus_files / "tree_train.jsonl"),
                     "-o", str(tree_file)]) == 0
        config = PipelineConfig(
            baseline_path=str(corpus_files / "baseline.jsonl"),
            event_path=str(corpus_files / "event.jsonl"),
            out_dir=str(tmp_path / "out"),
            max_x=75,
            use_tree=True,
            tree_file=str(tree_file),
            **FAST,
        )
        curve = run_eval(config)["curve"].read_text().splitlines()
        # the filtered ranking is shorter than the event window, so the
        # x grid gets clamped to it
        assert 1 < len(curve) - 1 < 75


class TestRunSweep:
    def test_summary_rows(self, corpus_files, tmp_path):
        config = PipelineConfig(
            baseline_path=str(corpus_files / "baseline.jsonl"),
            event_path=str(corpus_files / "event.jsonl"),
            tree_train_path=str(corpus_files / "tree_train.jsonl"),
            out_dir=str(tmp_path / "out"),
            scales=(6.0, 9.0),
            max_x=10,
            **FAST,
        )
        artifacts = run_sweep(config)
        rows = artifacts["sweep"].read_text().splitlines()
        assert rows[0] == "scale,tree,x,precision,recall"
        cells = {tuple(r.split(",")[:2]) for r in rows[1:]}
        assert cells == {("6.0", "0"), ("6.0", "1"), ("9.0", "0"), ("9.0", "1")}


class TestCli:
    def test_synth_then_detect(self, tmp_path, capsys):
        out = tmp_path / "synth"
        assert main(["synth", "-o", str(out), "--n-background", "40",
                     "--n-attack", "10", "--background-vocab-size", "20",
                     "--attack-vocab-size", "6", "--tokens-per-doc", "8",
                     "--overlap", "0.2", "--seed", "13"]) == 0
        assert (out / "baseline.jsonl").exists()
        assert (out / "event.jsonl").exists()

        run_dir = tmp_path / "run"
        code = main([
            "detect", str(out / "baseline.jsonl"), str(out / "event.jsonl"),
            "-o", str(run_dir), "--iterations", "120",
            "--inference-iterations", "30", "--seed", "5", "--top-x", "10",
        ])
        assert code == 0
        captured = capsys.readouterr()
        assert "ranked_tweets.csv" in captured.out
        assert (run_dir / "severity.json").exists()

    def test_detect_missing_file_exit_code(self, tmp_path, capsys):
        code = main(["detect", str(tmp_path / "a.jsonl"), str(tmp_path / "b.jsonl")])
        assert code == 2
        assert "[corpus]" in capsys.readouterr().err

    def test_severity_subcommand(self, capsys):
        assert main(["severity", "--n-attack", "40", "--n-all", "590",
                     "--n-user", "308300", "--beta", "1.0"]) == 0
        out = capsys.readouterr().out
        assert "0.0677966" in out
        assert "0.000129744" in out

    def test_severity_invalid_inputs(self, capsys):
        assert main(["severity", "--n-attack", "5", "--n-all", "0",
                     "--n-user", "10"]) == 2

    def test_eval_cli(self, corpus_files, tmp_path):
        code = main([
            "eval", str(corpus_files / "baseline.jsonl"),
            str(corpus_files / "event.jsonl"), "-o", str(tmp_path / "out"),
            "--max-x", "20", "--iterations", "120",
            "--inference-iterations", "30", "--seed", "5",
        ])
        assert code == 0
        assert (tmp_path / "out" / "curve.csv").exists()

    def test_sweep_cli(self, corpus_files, tmp_path):
        code = main([
            "sweep", str(corpus_files / "baseline.jsonl"),
            str(corpus_files / "event.jsonl"), "-o", str(tmp_path / "out"),
            "--scales", "6,9", "--max-x", "5",
            "--tree-train", str(corpus_files / "tree_train.jsonl"),
            "--iterations", "120", "--inference-iterations", "30", "--seed", "5",
        ])
        assert code == 0
        rows = (tmp_path / "out" / "sweep.csv").read_text().splitlines()
        assert rows[0] == "scale,tree,x,precision,recall"
        assert len(rows) > 4

    def test_config_file_with_flag_override(self, corpus_files, tmp_path):
        config_file = tmp_path / "run.conf"
        config_file.write_text(
            "iterations = 120\n"
            "inference_iterations = 30\n"
            "seed = 5\n"
            "top_x = 7   # label seven tweets\n"
            "\n"
            "n_user = 5000\n",
            encoding="utf-8",
        )
        out = tmp_path / "out"
        code = main([
            "detect", str(corpus_files / "baseline.jsonl"),
            str(corpus_files / "event.jsonl"), "-o", str(out),
            "--config", str(config_file), "--top-x", "3",
        ])
        assert code == 0
        severity = json.loads((out / "severity.json").read_text())
        assert severity["n_attack"] == 3  # flag beats config
        assert severity["n_user"] == 5000  # config beats default

    def test_config_file_unknown_key(self, corpus_files, tmp_path, capsys):
        config_file = tmp_path / "bad.conf"
        config_file.write_text("nonsense = 1\n", encoding="utf-8")
        code = main([
            "detect", str(corpus_files / "baseline.jsonl"),
            str(corpus_files / "event.jsonl"), "--config", str(config_file),
        ])
        assert code == 2
        assert "unknown config key" in capsys.readouterr().err
