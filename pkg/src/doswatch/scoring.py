"""Per-tweet attack-likelihood scores and the ranked report built from them."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .corpus import Corpus, Tweet
from .divergence import TopicScore
from .lda import LdaModel, derive_seed, infer_doc_topics

__all__ = [
    "RankedTweet",
    "tweet_score",
    "rank_tweets",
    "label_top_x",
    "write_ranked_tweets",
]


@dataclass(frozen=True)
class RankedTweet:
    tweet: Tweet
    score: float
    rank: int
    topic_mix: np.ndarray


def skl_vector(topic_scores: list[TopicScore]) -> np.ndarray:
    """Dense skl values indexed by topic, regardless of the ranking order."""
    vec = np.zeros(len(topic_scores))
    seen = set()
    for ts in topic_scores:
        if ts.topic_index in seen or not 0 <= ts.topic_index < len(topic_scores):
            raise ValueError("topic_scores must cover each topic index exactly once")
        seen.add(ts.topic_index)
        vec[ts.topic_index] = ts.skl
    return vec


def tweet_score(topic_mix, topic_scores: list[TopicScore]) -> float:
    """Relative score: the tweet's topic mixture dotted with the topic skl values."""
    mix = np.asarray(topic_mix, dtype=np.float64)
    vec = skl_vector(topic_scores)
    if mix.shape != vec.shape:
        raise ValueError(f"topic_mix has {mix.shape[0]} topics, scores have {vec.shape[0]}")
    return float(mix @ vec)


def rank_tweets(
    corpus: Corpus,
    model_a: LdaModel,
    topic_scores: list[TopicScore],
    inference_iterations: int = 100,
    seed: int = 42,
) -> list[RankedTweet]:
    """Score every event-window tweet against the event model and sort.

    Each tweet's topic mixture is re-inferred with a seed derived from the
    tweet's token content, so identical tweets score identically and corpus
    order only matters for tie-breaking (stable, corpus order first).
    """
    vec = skl_vector(topic_scores)
    if model_a.num_topics != vec.shape[0]:
        raise ValueError("topic_scores do not match the model's topic count")
    scored = []
    for tweet in corpus:
        mix = infer_doc_topics(
            model_a,
            tweet.tokens,
            inference_iterations=inference_iterations,
            seed=derive_seed(seed, tweet.tokens),
        )
        scored.append((float(mix @ vec), tweet, mix))
    scored.sort(key=lambda item: -item[0])
    return [
        RankedTweet(tweet=tweet, score=score, rank=i + 1, topic_mix=mix)
        for i, (score, tweet, mix) in enumerate(scored)
    ]


def label_top_x(ranked: list[RankedTweet], x: int) -> list[str]:
    """Ids of the first x ranked tweets, in rank order (the attack set)."""
    if x < 0:
        raise ValueError("x must be non-negative")
    if x > len(ranked):
        raise ValueError(f"x={x} exceeds ranking length {len(ranked)}")
    return [rt.tweet.id for rt in ranked[:x]]


def label_above_threshold(ranked: list[RankedTweet], threshold: float) -> list[str]:
    """Ids of all tweets whose relative score exceeds the threshold."""
    return [rt.tweet.id for rt in ranked if rt.score > threshold]


def write_ranked_tweets(path: str | Path, ranked: list[RankedTweet]) -> None:
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["rank", "score", "id", "text"])
        for rt in ranked:
            writer.writerow([rt.rank, repr(rt.score), rt.tweet.id, rt.tweet.raw_text])
