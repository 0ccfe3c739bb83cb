"""Numba kernels for collapsed Gibbs sampling.

Sampling order is sequential over tokens in corpus order; randomness comes
from an explicit xorshift64* state so that runs are bit-reproducible for a
given seed regardless of platform or scheduling.
"""

from __future__ import annotations

import numpy as np
from numba import njit

_SH12 = np.uint64(12)
_SH25 = np.uint64(25)
_SH27 = np.uint64(27)
_SH11 = np.uint64(11)
_MULT = np.uint64(0x2545F4914F6CDD1D)
_INV53 = 1.0 / 9007199254740992.0  # 2**-53

_MIX1 = np.uint64(0x9E3779B97F4A7C15)
_MIX2 = np.uint64(0xBF58476D1CE4E5B9)
_MIX3 = np.uint64(0x94D049BB133111EB)
_SH30 = np.uint64(30)
_SH31 = np.uint64(31)


@njit(cache=True)
def _seed_state(seed):
    # splitmix64 step; guards against the forbidden all-zero xorshift state
    z = seed + _MIX1
    z = (z ^ (z >> _SH30)) * _MIX2
    z = (z ^ (z >> _SH27)) * _MIX3
    z = z ^ (z >> _SH31)
    if z == np.uint64(0):
        z = _MIX1
    return z


@njit(cache=True)
def _next_uniform(state):
    # xorshift64*, top 53 bits -> float64 in [0, 1)
    x = state[0]
    x ^= x >> _SH12
    x ^= x << _SH25
    x ^= x >> _SH27
    state[0] = x
    y = (x * _MULT) >> _SH11
    return np.float64(y) * _INV53


@njit(cache=True)
def gibbs_train(doc_ids, word_ids, n_docs, vocab_size, n_topics,
                alpha, beta, iterations, seed):
    """Run the collapsed Gibbs sampler and return final-iteration counts.

    doc_ids/word_ids are parallel int64 arrays, one entry per token.
    Returns (doc_topic_counts, topic_word_counts, topic_counts).
    """
    n_tokens = doc_ids.shape[0]
    n_dk = np.zeros((n_docs, n_topics), dtype=np.int64)
    n_kw = np.zeros((n_topics, vocab_size), dtype=np.int64)
    n_k = np.zeros(n_topics, dtype=np.int64)
    z = np.empty(n_tokens, dtype=np.int64)
    probs = np.empty(n_topics, dtype=np.float64)

    state = np.empty(1, dtype=np.uint64)
    state[0] = _seed_state(seed)

    for t in range(n_tokens):
        k = int(_next_uniform(state) * n_topics)
        if k >= n_topics:
            k = n_topics - 1
        z[t] = k
        n_dk[doc_ids[t], k] += 1
        n_kw[k, word_ids[t]] += 1
        n_k[k] += 1

    v_beta = vocab_size * beta
    for _ in range(iterations):
        for t in range(n_tokens):
            d = doc_ids[t]
            w = word_ids[t]
            k = z[t]
            n_dk[d, k] -= 1
            n_kw[k, w] -= 1
            n_k[k] -= 1

            total = 0.0
            for kk in range(n_topics):
                p = (n_kw[kk, w] + beta) / (n_k[kk] + v_beta) * (n_dk[d, kk] + alpha)
                probs[kk] = p
                total += p
            u = _next_uniform(state) * total
            acc = 0.0
            k_new = n_topics - 1
            for kk in range(n_topics):
                acc += probs[kk]
                if u < acc:
                    k_new = kk
                    break

            z[t] = k_new
            n_dk[d, k_new] += 1
            n_kw[k_new, w] += 1
            n_k[k_new] += 1

    return n_dk, n_kw, n_k


@njit(cache=True)
def gibbs_infer(word_ids, topic_word, alpha, iterations, seed):
    """Sample topics for one held-out document with topic_word held fixed.

    Returns per-topic counts averaged over the second half of iterations.
    """
    n_topics = topic_word.shape[0]
    n_tokens = word_ids.shape[0]
    n_k = np.zeros(n_topics, dtype=np.int64)
    z = np.empty(n_tokens, dtype=np.int64)
    probs = np.empty(n_topics, dtype=np.float64)
    acc_counts = np.zeros(n_topics, dtype=np.float64)

    state = np.empty(1, dtype=np.uint64)
    state[0] = _seed_state(seed)

    for t in range(n_tokens):
        k = int(_next_uniform(state) * n_topics)
        if k >= n_topics:
            k = n_topics - 1
        z[t] = k
        n_k[k] += 1

    half_start = iterations // 2
    n_samples = 0
    for it in range(iterations):
        for t in range(n_tokens):
            w = word_ids[t]
            k = z[t]
            n_k[k] -= 1

            total = 0.0
            for kk in range(n_topics):
                p = topic_word[kk, w] * (n_k[kk] + alpha)
                probs[kk] = p
                total += p
            u = _next_uniform(state) * total
            acc = 0.0
            k_new = n_topics - 1
            for kk in range(n_topics):
                acc += probs[kk]
                if u < acc:
                    k_new = kk
                    break

            z[t] = k_new
            n_k[k_new] += 1

        if it >= half_start:
            for kk in range(n_topics):
                acc_counts[kk] += n_k[kk]
            n_samples += 1

    return acc_counts / n_samples
