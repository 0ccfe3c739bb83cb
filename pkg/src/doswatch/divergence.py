"""Rank event-window topics by novelty against the baseline window.

Each event topic is scored by its symmetric Kullback-Leibler divergence to
the closest baseline topic: a topic that also existed last week scores near
zero; a topic with no baseline counterpart scores high.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .lda import LdaModel

__all__ = [
    "TopicScore",
    "kl_divergence",
    "align_vocabularies",
    "rank_attack_topics",
    "write_topic_table",
]


@dataclass(frozen=True)
class TopicScore:
    topic_index: int
    skl: float
    matched_baseline_index: int


def kl_divergence(x, y) -> float:
    """Discrete KL divergence sum x_i * ln(x_i / y_i), with 0*ln(0/y) = 0.

    Requires x and y over the same aligned domain and y strictly positive
    wherever x has mass (alignment smoothing guarantees full positivity).
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape:
        raise ValueError(f"domain mismatch: {x.shape} vs {y.shape}")
    mask = x > 0
    return float(np.sum(x[mask] * np.log(x[mask] / y[mask])))


def align_vocabularies(
    model_a: LdaModel,
    model_b: LdaModel,
    epsilon: float = 1e-12,
) -> tuple[np.ndarray, np.ndarray]:
    """Re-express both models' topics over the union vocabulary.

    Tokens missing from a model receive probability ``epsilon`` and each row
    is renormalized, keeping every aligned row strictly positive. Union
    column order is A's vocabulary followed by B-only tokens in B id order.
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    a_tokens = model_a.vocab.id_to_token
    b_tokens = model_b.vocab.id_to_token
    b_only = [t for t in b_tokens if t not in model_a.vocab]
    union_size = len(a_tokens) + len(b_only)

    aligned_a = np.full((model_a.num_topics, union_size), epsilon)
    aligned_a[:, : len(a_tokens)] = model_a.topic_word

    aligned_b = np.full((model_b.num_topics, union_size), epsilon)
    b_columns = np.empty(len(b_tokens), dtype=np.int64)
    b_only_pos = {t: len(a_tokens) + i for i, t in enumerate(b_only)}
    for j, tok in enumerate(b_tokens):
        b_columns[j] = model_a.vocab.token_to_id.get(tok, b_only_pos.get(tok, -1))
    aligned_b[:, b_columns] = model_b.topic_word

    # rows already sum to 1, so renormalize by the mass the fill added;
    # with nothing added this is exact identity
    aligned_a /= 1.0 + (union_size - len(a_tokens)) * epsilon
    aligned_b /= 1.0 + (union_size - len(b_tokens)) * epsilon
    return aligned_a, aligned_b


def rank_attack_topics(
    model_a: LdaModel,
    model_b: LdaModel,
    epsilon: float = 1e-12,
) -> list[TopicScore]:
    """Score every event-window topic against all baseline topics.

    For event topic j, skl = min over baseline topics m of
    KL(T_j, T'_m) + KL(T'_m, T_j). Returns one TopicScore per event topic,
    sorted by skl descending; equal scores order by lower topic index.
    """
    aligned_a, aligned_b = align_vocabularies(model_a, model_b, epsilon)
    scores = []
    for j in range(aligned_a.shape[0]):
        best_skl = np.inf
        best_m = 0
        for m in range(aligned_b.shape[0]):
            skl = kl_divergence(aligned_a[j], aligned_b[m]) + kl_divergence(
                aligned_b[m], aligned_a[j]
            )
            if skl < best_skl:
                best_skl = skl
                best_m = m
        scores.append(TopicScore(topic_index=j, skl=best_skl, matched_baseline_index=best_m))
    scores.sort(key=lambda s: (-s.skl, s.topic_index))
    return scores


def top_tokens(model: LdaModel, topic_index: int, n: int = 10) -> list[str]:
    """Highest-weight tokens of one topic, heaviest first (stable on ties)."""
    row = model.topic_word[topic_index]
    order = np.argsort(-row, kind="stable")[:n]
    return [model.vocab.id_to_token[i] for i in order]


def write_topic_table(path: str | Path, scores: list[TopicScore], model_a: LdaModel) -> None:
    """Write the ranked topic report: index, skl, matched baseline, top-10 tokens."""
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["topic_index", "skl", "matched_baseline_index", "top_tokens"])
        for score in scores:
            writer.writerow([
                score.topic_index,
                repr(score.skl),
                score.matched_baseline_index,
                " ".join(top_tokens(model_a, score.topic_index)),
            ])
