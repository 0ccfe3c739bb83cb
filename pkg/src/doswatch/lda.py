"""Seeded LDA topic models trained per time window via collapsed Gibbs sampling.

A topic distribution (over the vocabulary or over topics) is represented as
a 1-D float64 numpy array that sums to 1. Training is sequential (the scan
order is part of the determinism contract), but trained models are
immutable and inference over them is read-only, so scoring many documents
concurrently is safe.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import _gibbs
from .corpus import Corpus

__all__ = [
    "LdaHyperparams",
    "Vocabulary",
    "LdaModel",
    "num_topics",
    "train",
    "infer_doc_topics",
    "derive_seed",
    "save_model",
    "load_model",
]

MODEL_FORMAT = "doswatch-lda"
MODEL_FORMAT_VERSION = 1

_U64_MASK = 0xFFFFFFFFFFFFFFFF


def num_topics(num_docs: int, topic_count_scale: float, log_base: float = 10.0) -> int:
    """Topic count for a corpus of ``num_docs`` documents.

    floor(topic_count_scale * log(num_docs)), clamped below at 2 so the
    smallest corpora still yield a comparable pair of topics. The log base
    defaults to 10 and is exposed as a knob.
    """
    if num_docs < 1:
        raise ValueError("num_docs must be >= 1")
    if topic_count_scale <= 0:
        raise ValueError("topic_count_scale must be positive")
    if log_base <= 1:
        raise ValueError("log_base must be > 1")
    if log_base == 10.0:
        log_docs = math.log10(num_docs)  # exact at powers of ten, unlike log(n)/log(10)
    elif log_base == 2.0:
        log_docs = math.log2(num_docs)
    elif log_base == math.e:
        log_docs = math.log(num_docs)
    else:
        log_docs = math.log(num_docs, log_base)
    return max(2, math.floor(topic_count_scale * log_docs))


@dataclass(frozen=True)
class LdaHyperparams:
    """Gibbs-sampler settings for one window's model.

    ``dirichlet_alpha`` defaults to 50 / num_topics and ``dirichlet_beta``
    to 0.01 when left unset.
    """

    num_topics: int
    dirichlet_alpha: float | None = None
    dirichlet_beta: float = 0.01
    iterations: int = 1000
    seed: int = 42

    def __post_init__(self):
        if self.num_topics < 2:
            raise ValueError("num_topics must be >= 2")
        if self.dirichlet_alpha is None:
            object.__setattr__(self, "dirichlet_alpha", 50.0 / self.num_topics)
        if self.dirichlet_alpha <= 0:
            raise ValueError("dirichlet_alpha must be positive")
        if self.dirichlet_beta <= 0:
            raise ValueError("dirichlet_beta must be positive")
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if not 0 <= self.seed <= _U64_MASK:
            raise ValueError("seed must fit in 64 unsigned bits")


class Vocabulary:
    """Bijective token <-> dense-id map, ids contiguous in first-appearance order."""

    def __init__(self, tokens: list[str]):
        self.token_to_id: dict[str, int] = {}
        self.id_to_token: list[str] = []
        for token in tokens:
            if token not in self.token_to_id:
                self.token_to_id[token] = len(self.id_to_token)
                self.id_to_token.append(token)

    @property
    def size(self) -> int:
        return len(self.id_to_token)

    def __len__(self) -> int:
        return len(self.id_to_token)

    def __contains__(self, token: str) -> bool:
        return token in self.token_to_id

    def __eq__(self, other) -> bool:
        return isinstance(other, Vocabulary) and self.id_to_token == other.id_to_token

    def encode(self, tokens) -> np.ndarray:
        """Map tokens to ids, silently skipping out-of-vocabulary tokens."""
        ids = [self.token_to_id[t] for t in tokens if t in self.token_to_id]
        return np.asarray(ids, dtype=np.int64)


@dataclass
class LdaModel:
    """A trained window model.

    ``topic_word`` is (num_topics, vocab_size), beta-smoothed, rows sum to 1
    and are strictly positive. ``doc_topic`` is (num_docs, num_topics),
    alpha-smoothed, one row per training document; it is None for models
    restored from disk (persistence keeps only what scoring needs).
    """

    vocab: Vocabulary
    topic_word: np.ndarray
    hyper: LdaHyperparams
    doc_topic: np.ndarray | None = None

    @property
    def num_topics(self) -> int:
        return self.topic_word.shape[0]


def train(corpus: Corpus, hyper: LdaHyperparams) -> LdaModel:
    """Train an LDA model on one window with a seeded collapsed Gibbs sampler.

    Deterministic for a fixed corpus + hyperparams. topic_word/doc_topic are
    estimated from the final iteration's counts with additive
    dirichlet_beta / dirichlet_alpha smoothing. Empty documents stay in the
    corpus and receive the prior (uniform) topic row.
    """
    if len(corpus) == 0:
        raise ValueError("corpus must be non-empty")

    all_tokens = [tok for tweet in corpus for tok in tweet.tokens]
    if not all_tokens:
        raise ValueError("no trainable tokens in corpus")
    vocab = Vocabulary(all_tokens)

    doc_ids = []
    word_ids = []
    for d, tweet in enumerate(corpus):
        for tok in tweet.tokens:
            doc_ids.append(d)
            word_ids.append(vocab.token_to_id[tok])
    doc_ids = np.asarray(doc_ids, dtype=np.int64)
    word_ids = np.asarray(word_ids, dtype=np.int64)

    n_dk, n_kw, n_k = _gibbs.gibbs_train(
        doc_ids,
        word_ids,
        len(corpus),
        vocab.size,
        hyper.num_topics,
        float(hyper.dirichlet_alpha),
        float(hyper.dirichlet_beta),
        int(hyper.iterations),
        np.uint64(hyper.seed),
    )

    beta = hyper.dirichlet_beta
    alpha = hyper.dirichlet_alpha
    topic_word = (n_kw + beta) / (n_k[:, None] + vocab.size * beta)
    doc_lengths = n_dk.sum(axis=1)
    doc_topic = (n_dk + alpha) / (doc_lengths[:, None] + hyper.num_topics * alpha)
    return LdaModel(vocab=vocab, topic_word=topic_word, hyper=hyper, doc_topic=doc_topic)


def infer_doc_topics(
    model: LdaModel,
    tokens,
    inference_iterations: int = 100,
    seed: int = 42,
) -> np.ndarray:
    """Topic distribution for one document under a trained model.

    Gibbs-samples the document with topic_word held fixed, averages the
    topic counts over the second half of iterations, then applies
    dirichlet_alpha smoothing. Out-of-vocabulary tokens are skipped; a
    document with no known tokens gets the uniform prior.
    """
    if inference_iterations < 1:
        raise ValueError("inference_iterations must be >= 1")
    k = model.num_topics
    word_ids = model.vocab.encode(tokens)
    alpha = model.hyper.dirichlet_alpha
    if word_ids.size == 0:
        return np.full(k, 1.0 / k)
    avg_counts = _gibbs.gibbs_infer(
        word_ids,
        model.topic_word,
        float(alpha),
        int(inference_iterations),
        np.uint64(seed & _U64_MASK),
    )
    return (avg_counts + alpha) / (word_ids.size + k * alpha)


def derive_seed(base_seed: int, *parts) -> int:
    """Mix a base seed with arbitrary parts into a new 64-bit seed.

    Content-derived (hash of the parts' repr), so identical inputs get
    identical seeds no matter where they sit in a corpus or which sweep
    cell asks.
    """
    digest = hashlib.blake2b(repr(parts).encode("utf-8"), digest_size=8).digest()
    return (base_seed ^ int.from_bytes(digest, "big")) & _U64_MASK


def save_model(model: LdaModel, path: str | Path) -> None:
    """Persist a model as versioned JSON; load_model round-trips bit-exactly."""
    payload = {
        "format": MODEL_FORMAT,
        "version": MODEL_FORMAT_VERSION,
        "vocabulary": model.vocab.id_to_token,
        "hyperparams": {
            "num_topics": model.hyper.num_topics,
            "dirichlet_alpha": model.hyper.dirichlet_alpha,
            "dirichlet_beta": model.hyper.dirichlet_beta,
            "iterations": model.hyper.iterations,
            "seed": model.hyper.seed,
        },
        "topic_word": [[float(p) for p in row] for row in model.topic_word],
    }
    Path(path).write_text(
        json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n",
        encoding="utf-8",
    )


def load_model(path: str | Path) -> LdaModel:
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    if payload.get("format") != MODEL_FORMAT:
        raise ValueError(f"not a model file: {path}")
    if payload.get("version") != MODEL_FORMAT_VERSION:
        raise ValueError(f"unsupported model version {payload.get('version')}")
    hyper = LdaHyperparams(**payload["hyperparams"])
    vocab = Vocabulary(payload["vocabulary"])
    topic_word = np.asarray(payload["topic_word"], dtype=np.float64)
    return LdaModel(vocab=vocab, topic_word=topic_word, hyper=hyper, doc_topic=None)
