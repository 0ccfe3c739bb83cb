"""Evaluation protocol: precision/recall at x, DET points, synthetic corpora
and the parameter sweep.

Labeled attack-day tweet collections are rarely redistributable, so the
quantitative checks run on a synthetic stand-in: a baseline window of
background chatter and an event window where attack documents (drawn from a
separate attack vocabulary, with some background bleed-through) are mixed
in.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import classifier, divergence, lda, scoring
from .corpus import Corpus, Label, TokenizerConfig, Tweet, WindowTag, preprocess
from .scoring import RankedTweet

__all__ = [
    "EvalPoint",
    "EvalCurve",
    "SweepResult",
    "SynthSpec",
    "precision_recall_curve",
    "det_points",
    "generate_synthetic",
    "parameter_sweep",
    "write_curve",
    "write_det",
    "write_sweep",
]


@dataclass(frozen=True)
class EvalPoint:
    x: int
    precision: float
    recall: float


@dataclass
class EvalCurve:
    """Precision/recall points plus a flag for the degenerate no-gold case."""

    points: list[EvalPoint]
    zero_gold_attacks: bool = False

    def __iter__(self):
        return iter(self.points)

    def __len__(self) -> int:
        return len(self.points)

    def __getitem__(self, idx):
        return self.points[idx]


@dataclass(frozen=True)
class SweepResult:
    topic_count_scale: float
    use_tree: bool
    curve: EvalCurve


@dataclass(frozen=True)
class SynthSpec:
    """Shape of one synthetic entity's two windows.

    Background token names are derived from the seed, so different seeds
    stand in for different entities (disjoint chatter vocabularies); the
    attack vocabulary is shared across entities, mirroring outage language
    that transfers between services.
    """

    n_background: int
    n_attack: int
    background_vocab_size: int
    attack_vocab_size: int
    tokens_per_doc: int
    overlap_fraction: float
    seed: int

    def __post_init__(self):
        for name in ("n_background", "n_attack"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")
        for name in ("background_vocab_size", "attack_vocab_size", "tokens_per_doc"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if not 0.0 <= self.overlap_fraction <= 1.0:
            raise ValueError("overlap_fraction must be in [0, 1]")


def precision_recall_curve(ranked: list[RankedTweet], xs: list[int],
                           total_gold_attacks: int | None = None) -> EvalCurve:
    """Precision and recall when the top x ranked tweets are labeled Attack.

    precision(x) = TP(x)/x and recall(x) = TP(x)/(gold attacks), where TP(x)
    counts gold-Attack tweets among ranks 1..x. Every tweet must carry a
    gold label and each x must lie in [1, len(ranked)]. With zero gold
    attacks, recall is reported as 0 and the curve is flagged.

    When the ranking was filtered (a subsequence of the event window), pass
    ``total_gold_attacks`` of the full window so recall keeps measuring
    against every actual attack tweet, not just the survivors.
    """
    n = len(ranked)
    for rt in ranked:
        if rt.tweet.label is Label.UNLABELED:
            raise ValueError(f"tweet {rt.tweet.id!r} has no gold label")
    is_attack = np.array([rt.tweet.label is Label.ATTACK for rt in ranked], dtype=np.int64)
    cum_tp = np.cumsum(is_attack)
    if total_gold_attacks is None:
        total_gold = int(cum_tp[-1]) if n else 0
    else:
        total_gold = total_gold_attacks

    points = []
    for x in xs:
        if not 1 <= x <= n:
            raise ValueError(f"x={x} outside [1, {n}]")
        tp = int(cum_tp[x - 1])
        recall = tp / total_gold if total_gold else 0.0
        points.append(EvalPoint(x=x, precision=tp / x, recall=recall))
    return EvalCurve(points=points, zero_gold_attacks=total_gold == 0)


def det_points(curve: EvalCurve | list[EvalPoint]) -> list[tuple[float, float]]:
    """Detection-error trade-off pairs (1 - recall, 1 - precision), in x order."""
    points = list(curve)
    if not points:
        raise ValueError("empty curve")
    return [(1.0 - p.recall, 1.0 - p.precision) for p in points]


def _synth_tweet(tweet_id: str, tokens: list[str], label: Label,
                 cfg: TokenizerConfig) -> Tweet:
    raw_text = " ".join(tokens)
    return Tweet(id=tweet_id, raw_text=raw_text,
                 tokens=tuple(preprocess(raw_text, cfg)), label=label)


def generate_synthetic(spec: SynthSpec) -> tuple[Corpus, Corpus]:
    """Build (baseline corpus, labeled event corpus) for one synthetic entity.

    The baseline draws only from the background vocabulary. The event window
    mixes fresh background documents (gold NonAttack) with attack documents
    (gold Attack) whose tokens come from the attack vocabulary except for an
    overlap_fraction share of background tokens. Fully determined by the
    SynthSpec, seed included.
    """
    rng = np.random.default_rng(spec.seed)
    cfg = TokenizerConfig()
    background = [f"bg{spec.seed}w{i:04d}" for i in range(spec.background_vocab_size)]
    attack = [f"atk{i:03d}" for i in range(spec.attack_vocab_size)]

    def background_doc() -> list[str]:
        return [background[j] for j in rng.integers(0, len(background), spec.tokens_per_doc)]

    def attack_doc() -> list[str]:
        tokens = []
        for _ in range(spec.tokens_per_doc):
            if rng.random() < spec.overlap_fraction:
                tokens.append(background[rng.integers(0, len(background))])
            else:
                tokens.append(attack[rng.integers(0, len(attack))])
        return tokens

    baseline_tweets = [
        _synth_tweet(f"b{i:05d}", background_doc(), Label.UNLABELED, cfg)
        for i in range(spec.n_background)
    ]

    event_docs = [(background_doc(), Label.NON_ATTACK) for _ in range(spec.n_background)]
    event_docs += [(attack_doc(), Label.ATTACK) for _ in range(spec.n_attack)]
    order = rng.permutation(len(event_docs))
    event_tweets = [
        _synth_tweet(f"e{i:05d}", *event_docs[j], cfg)
        for i, j in enumerate(order)
    ]

    return (
        Corpus(tweets=tuple(baseline_tweets), window_tag=WindowTag.BASELINE),
        Corpus(tweets=tuple(event_tweets), window_tag=WindowTag.EVENT),
    )


def _rank_for_scale(baseline: Corpus, event: Corpus, scale: float, *,
                    log_base: float, iterations: int, inference_iterations: int,
                    dirichlet_beta: float, epsilon: float, seed: int,
                    dirichlet_alpha: float | None = None) -> list[RankedTweet]:
    """One pipeline cell: train both window models, rank topics, rank tweets."""
    hyper_b = lda.LdaHyperparams(
        num_topics=lda.num_topics(len(baseline), scale, log_base),
        dirichlet_alpha=dirichlet_alpha, dirichlet_beta=dirichlet_beta,
        iterations=iterations, seed=lda.derive_seed(seed, "baseline"),
    )
    hyper_a = lda.LdaHyperparams(
        num_topics=lda.num_topics(len(event), scale, log_base),
        dirichlet_alpha=dirichlet_alpha, dirichlet_beta=dirichlet_beta,
        iterations=iterations, seed=lda.derive_seed(seed, "event"),
    )
    model_b = lda.train(baseline, hyper_b)
    model_a = lda.train(event, hyper_a)
    topic_scores = divergence.rank_attack_topics(model_a, model_b, epsilon)
    return scoring.rank_tweets(
        event, model_a, topic_scores,
        inference_iterations=inference_iterations, seed=seed,
    )


def train_filter_tree(tree_training: Corpus,
                      min_leaf: int = 4) -> tuple[classifier.DecisionTree, lda.Vocabulary]:
    """Train the bag-of-words CART on a labeled corpus; returns tree + its vocab."""
    vocab = lda.Vocabulary([tok for tw in tree_training for tok in tw.tokens])
    samples = []
    for tw in tree_training:
        if tw.label is Label.UNLABELED:
            raise ValueError(f"tree training tweet {tw.id!r} has no gold label")
        samples.append((classifier.featurize(tw, vocab), tw.label))
    return classifier.train_cart(samples, min_leaf=min_leaf), vocab


def parameter_sweep(
    baseline: Corpus,
    event: Corpus,
    scales: list[float],
    xs: list[int],
    with_and_without_tree: bool = False,
    tree_training: Corpus | None = None,
    *,
    log_base: float = 10.0,
    iterations: int = 1000,
    inference_iterations: int = 100,
    dirichlet_alpha: float | None = None,
    dirichlet_beta: float = 0.01,
    epsilon: float = 1e-12,
    seed: int = 42,
    tree_min_leaf: int = 4,
) -> list[SweepResult]:
    """Evaluate the full scale x tree-flag grid on a labeled event window.

    Each cell derives its seed from (seed, scale, tree flag) so results do
    not depend on evaluation order. With the tree enabled the ranked list
    shrinks, so each cell keeps only the xs that fit its list length.
    """
    tree_flags = [False, True] if with_and_without_tree else [False]
    tree = vocab = None
    if True in tree_flags:
        if tree_training is None:
            raise ValueError("tree sweep requested but no labeled tree_training corpus given")
        tree, vocab = train_filter_tree(tree_training, min_leaf=tree_min_leaf)
    total_gold = sum(1 for tw in event if tw.label is Label.ATTACK)

    results = []
    for scale in scales:
        for use_tree in tree_flags:
            cell_seed = lda.derive_seed(seed, scale, use_tree)
            ranked = _rank_for_scale(
                baseline, event, scale,
                log_base=log_base, iterations=iterations,
                inference_iterations=inference_iterations,
                dirichlet_alpha=dirichlet_alpha, dirichlet_beta=dirichlet_beta,
                epsilon=epsilon, seed=cell_seed,
            )
            if use_tree:
                ranked = classifier.filter_ranked(ranked, tree, vocab)
            cell_xs = [x for x in xs if x <= len(ranked)]
            curve = precision_recall_curve(ranked, cell_xs, total_gold_attacks=total_gold)
            results.append(SweepResult(topic_count_scale=scale, use_tree=use_tree,
                                       curve=curve))
    return results


def write_curve(path: str | Path, curve: EvalCurve | list[EvalPoint]) -> None:
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["x", "precision", "recall"])
        for p in curve:
            writer.writerow([p.x, repr(p.precision), repr(p.recall)])


def write_det(path: str | Path, curve: EvalCurve | list[EvalPoint]) -> None:
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["x", "missed_detection_rate", "false_positive_measure"])
        for p, (md, fp) in zip(list(curve), det_points(curve)):
            writer.writerow([p.x, repr(md), repr(fp)])


def write_sweep(path: str | Path, results: list[SweepResult]) -> None:
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["scale", "tree", "x", "precision", "recall"])
        for res in results:
            for p in res.curve:
                writer.writerow([
                    repr(res.topic_count_scale),
                    int(res.use_tree),
                    p.x,
                    repr(p.precision),
                    repr(p.recall),
                ])
