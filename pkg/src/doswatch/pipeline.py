"""End-to-end orchestration: load windows, train models, rank, filter, score.

Every stage artifact is persisted so each step can be inspected on its own,
and reruns with the same config and seeds are byte-identical.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from pathlib import Path

from . import classifier, divergence, evaluation, lda, scoring
from .corpus import (
    Corpus,
    Label,
    TokenizerConfig,
    WindowTag,
    load_corpus,
    load_stopwords,
)
from .severity import SeverityInput, severity_level

__all__ = ["PipelineConfig", "PipelineError", "run_detect", "run_eval", "run_sweep"]


class PipelineError(Exception):
    """A stage-tagged pipeline failure."""

    def __init__(self, stage: str, message: str):
        super().__init__(f"[{stage}] {message}")
        self.stage = stage


@dataclass(frozen=True)
class PipelineConfig:
    """All pipeline knobs with runnable defaults.

    ``top_x`` and ``score_threshold`` are mutually exclusive ways to cut the
    ranking into the attack set; when neither is given, top_x=40 applies.
    """

    baseline_path: str = ""
    event_path: str = ""
    out_dir: str = "doswatch_out"
    topic_count_scale: float = 10.0
    log_base: float = 10.0
    iterations: int = 1000
    inference_iterations: int = 100
    dirichlet_alpha: float | None = None
    dirichlet_beta: float = 0.01
    seed: int = 42
    epsilon: float = 1e-12
    top_x: int | None = None
    score_threshold: float | None = None
    use_tree: bool = False
    tree_file: str | None = None
    severity_beta: float = 0.5
    n_user: int = 100_000
    stopwords_file: str | None = None
    keep_urls: bool = True
    strip_punctuation: bool = True
    max_x: int = 100
    scales: tuple[float, ...] = (5, 6, 7, 8, 9, 10, 11, 12, 13, 14)
    tree_train_path: str | None = None

    def resolved_labeling(self) -> tuple[int | None, float | None]:
        if self.top_x is not None and self.score_threshold is not None:
            raise ValueError("set at most one of top_x / score_threshold")
        if self.top_x is None and self.score_threshold is None:
            return 40, None
        return self.top_x, self.score_threshold

    def tokenizer_config(self) -> TokenizerConfig:
        stopwords = None
        if self.stopwords_file:
            stopwords = load_stopwords(self.stopwords_file)
        kwargs = {"keep_urls": self.keep_urls, "strip_punctuation": self.strip_punctuation}
        if stopwords is not None:
            kwargs["stopwords"] = stopwords
        return TokenizerConfig(**kwargs)


def _stage(stage: str, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except PipelineError:
        raise
    except Exception as exc:
        raise PipelineError(stage, str(exc)) from exc


def _load_windows(config: PipelineConfig) -> tuple[Corpus, Corpus]:
    cfg = _stage("corpus", config.tokenizer_config)
    baseline = _stage("corpus", load_corpus, config.baseline_path, WindowTag.BASELINE, cfg)
    event = _stage("corpus", load_corpus, config.event_path, WindowTag.EVENT, cfg)
    return baseline, event


def _train_windows(config: PipelineConfig, baseline: Corpus,
                   event: Corpus) -> tuple[lda.LdaModel, lda.LdaModel]:
    def build(corpus: Corpus, tag: str) -> lda.LdaModel:
        hyper = lda.LdaHyperparams(
            num_topics=lda.num_topics(len(corpus), config.topic_count_scale,
                                      config.log_base),
            dirichlet_alpha=config.dirichlet_alpha,
            dirichlet_beta=config.dirichlet_beta,
            iterations=config.iterations,
            seed=lda.derive_seed(config.seed, tag),
        )
        return lda.train(corpus, hyper)

    model_b = _stage("lda", build, baseline, "baseline")
    model_a = _stage("lda", build, event, "event")
    return model_b, model_a


def _load_filter(config: PipelineConfig):
    if not config.tree_file:
        raise PipelineError("classifier", "use_tree is set but no tree_file given")
    tree, vocab = _stage("classifier", classifier.load_tree, config.tree_file)
    if vocab is None:
        raise PipelineError("classifier",
                            f"tree file {config.tree_file} carries no vocabulary")
    return tree, vocab


def run_detect(config: PipelineConfig) -> dict[str, Path]:
    """Run the full detection pipeline and write all report files.

    Returns a name -> path map of the artifacts written: both window
    models, the topic table, the ranked tweets (filtered variant when the
    tree is on) and the severity summary.
    """
    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    baseline, event = _load_windows(config)
    model_b, model_a = _train_windows(config, baseline, event)

    artifacts: dict[str, Path] = {}
    artifacts["model_baseline"] = out_dir / "model_baseline.json"
    artifacts["model_event"] = out_dir / "model_event.json"
    _stage("lda", lda.save_model, model_b, artifacts["model_baseline"])
    _stage("lda", lda.save_model, model_a, artifacts["model_event"])

    topic_scores = _stage("divergence", divergence.rank_attack_topics,
                          model_a, model_b, config.epsilon)
    artifacts["topics"] = out_dir / "topics.csv"
    _stage("divergence", divergence.write_topic_table,
           artifacts["topics"], topic_scores, model_a)

    ranked = _stage("scoring", scoring.rank_tweets, event, model_a, topic_scores,
                    config.inference_iterations, config.seed)
    artifacts["ranked_tweets"] = out_dir / "ranked_tweets.csv"
    _stage("scoring", scoring.write_ranked_tweets, artifacts["ranked_tweets"], ranked)

    labeled_pool = ranked
    if config.use_tree:
        tree, vocab = _load_filter(config)
        labeled_pool = _stage("classifier", classifier.filter_ranked,
                              ranked, tree, vocab)
        artifacts["filtered_tweets"] = out_dir / "filtered_tweets.csv"
        _stage("classifier", scoring.write_ranked_tweets,
               artifacts["filtered_tweets"], labeled_pool)

    top_x, threshold = _stage("scoring", config.resolved_labeling)
    if threshold is not None:
        attack_ids = _stage("scoring", scoring.label_above_threshold,
                            labeled_pool, threshold)
    else:
        attack_ids = _stage("scoring", scoring.label_top_x,
                            labeled_pool, min(top_x, len(labeled_pool)))

    severity_input = _stage("severity", SeverityInput,
                            n_attack=len(attack_ids), n_all=len(event),
                            n_user=config.n_user, beta=config.severity_beta)
    summary = {
        "n_attack": len(attack_ids),
        "n_all": len(event),
        "n_user": config.n_user,
        "beta": config.severity_beta,
        "severity_level": severity_level(severity_input),
        "volume_endpoint": severity_level(replace(severity_input, beta=1.0)),
        "audience_endpoint": severity_level(replace(severity_input, beta=0.0)),
        "attack_ids": attack_ids,
    }
    artifacts["severity"] = out_dir / "severity.json"
    artifacts["severity"].write_text(
        json.dumps(summary, sort_keys=True, indent=2) + "\n", encoding="utf-8"
    )
    return artifacts


def _require_labels(corpus: Corpus, stage: str) -> None:
    for tweet in corpus:
        if tweet.label is Label.UNLABELED:
            raise PipelineError(stage, f"tweet {tweet.id!r} has no gold label")


def run_eval(config: PipelineConfig) -> dict[str, Path]:
    """Single-scale evaluation: curve + DET CSVs over x = 1..max_x."""
    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    baseline, event = _load_windows(config)
    _require_labels(event, "eval")
    if config.max_x < 1:
        raise PipelineError("eval", "empty evaluation grid")

    model_b, model_a = _train_windows(config, baseline, event)
    topic_scores = _stage("divergence", divergence.rank_attack_topics,
                          model_a, model_b, config.epsilon)
    ranked = _stage("scoring", scoring.rank_tweets, event, model_a, topic_scores,
                    config.inference_iterations, config.seed)
    total_gold = sum(1 for tw in event if tw.label is Label.ATTACK)
    if config.use_tree:
        tree, vocab = _load_filter(config)
        ranked = _stage("classifier", classifier.filter_ranked, ranked, tree, vocab)

    xs = [x for x in range(1, config.max_x + 1) if x <= len(ranked)]
    if not xs:
        raise PipelineError("eval", "empty evaluation grid")
    curve = _stage("eval", evaluation.precision_recall_curve, ranked, xs,
                   total_gold_attacks=total_gold)

    artifacts = {
        "curve": out_dir / "curve.csv",
        "det": out_dir / "det.csv",
    }
    _stage("eval", evaluation.write_curve, artifacts["curve"], curve)
    _stage("eval", evaluation.write_det, artifacts["det"], curve)
    return artifacts


def run_sweep(config: PipelineConfig) -> dict[str, Path]:
    """Full scale x tree grid; writes the sweep summary CSV."""
    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    baseline, event = _load_windows(config)
    _require_labels(event, "sweep")
    if config.max_x < 1 or not config.scales:
        raise PipelineError("sweep", "empty evaluation grid")

    tree_training = None
    with_tree = False
    if config.tree_train_path:
        cfg = _stage("corpus", config.tokenizer_config)
        tree_training = _stage("corpus", load_corpus, config.tree_train_path,
                               WindowTag.EVENT, cfg)
        _require_labels(tree_training, "sweep")
        with_tree = True

    results = _stage("sweep", evaluation.parameter_sweep,
                     baseline, event, list(config.scales),
                     list(range(1, config.max_x + 1)),
                     with_tree, tree_training,
                     log_base=config.log_base,
                     iterations=config.iterations,
                     inference_iterations=config.inference_iterations,
                     dirichlet_alpha=config.dirichlet_alpha,
                     dirichlet_beta=config.dirichlet_beta,
                     epsilon=config.epsilon,
                     seed=config.seed)
    artifacts = {"sweep": out_dir / "sweep.csv"}
    _stage("sweep", evaluation.write_sweep, artifacts["sweep"], results)
    return artifacts
