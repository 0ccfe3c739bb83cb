#!/usr/bin/env python3
# Per-window topic models.
#
# Each time window (event day vs. the week before) gets its own seeded LDA
# model. The topic count comes from the corpus size; training is bit-for-bit
# reproducible for a fixed seed.

import numpy as np

from doswatch import LdaHyperparams, SynthSpec, generate_synthetic, num_topics, train
from doswatch.divergence import top_tokens

# A synthetic entity: background chatter in both windows, plus attack-vocab
# documents mixed into the event window.
baseline, event = generate_synthetic(
    SynthSpec(n_background=150, n_attack=40, background_vocab_size=60,
              attack_vocab_size=10, tokens_per_doc=10, overlap_fraction=0.2,
              seed=101))

# Topic count scales with corpus size: floor(scale * log10(docs)).
k_baseline = num_topics(len(baseline), topic_count_scale=10)
k_event = num_topics(len(event), topic_count_scale=10)
print(f"{len(baseline)} baseline docs -> {k_baseline} topics")
print(f"{len(event)} event docs    -> {k_event} topics")

model_b = train(baseline, LdaHyperparams(num_topics=k_baseline, iterations=400, seed=1))
model_a = train(event, LdaHyperparams(num_topics=k_event, iterations=400, seed=2))

print(f"\nevent model: {model_a.num_topics} topics x {model_a.vocab.size} tokens")
print("rows sum to 1:", np.allclose(model_a.topic_word.sum(axis=1), 1.0, atol=1e-9))

# Attack documents concentrate into their own topics; chatter topics look
# like the baseline's.
print("\ntop tokens per event topic:")
for k in range(model_a.num_topics):
    tokens = top_tokens(model_a, k, n=5)
    marker = "  <-- attack vocabulary" if any(t.startswith("atk") for t in tokens) else ""
    print(f"  topic {k:2d}: {' '.join(tokens)}{marker}")

# Determinism: retraining with the same seed reproduces the model exactly.
again = train(event, LdaHyperparams(num_topics=k_event, iterations=400, seed=2))
print("\nretrain with same seed is bit-identical:",
      np.array_equal(model_a.topic_word, again.topic_word))
