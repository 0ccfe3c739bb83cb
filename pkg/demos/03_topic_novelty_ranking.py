#!/usr/bin/env python3
# Ranking event topics by novelty.
#
# An event-window topic is novel if no baseline topic resembles it. Each
# event topic is scored by its symmetric KL divergence to the closest
# baseline topic; new-event (attack) topics float to the top.

from doswatch import (
    LdaHyperparams,
    SynthSpec,
    generate_synthetic,
    kl_divergence,
    num_topics,
    rank_attack_topics,
    train,
)
from doswatch.divergence import top_tokens

# --- KL divergence on toy vectors ------------------------------------------
p, q = [0.5, 0.5], [0.25, 0.75]
print(f"KL({p} || {q}) = {kl_divergence(p, q):.6f}")
print(f"KL({q} || {p}) = {kl_divergence(q, p):.6f}   (asymmetric)")
skl = kl_divergence(p, q) + kl_divergence(q, p)
print(f"symmetric KL = {skl:.6f}\n")

# --- novelty ranking on trained windows -------------------------------------
baseline, event = generate_synthetic(
    SynthSpec(n_background=150, n_attack=40, background_vocab_size=60,
              attack_vocab_size=10, tokens_per_doc=10, overlap_fraction=0.2,
              seed=101))
model_b = train(baseline, LdaHyperparams(
    num_topics=num_topics(len(baseline), 10), iterations=400, seed=1))
model_a = train(event, LdaHyperparams(
    num_topics=num_topics(len(event), 10), iterations=400, seed=2))

# The two windows have different vocabularies, so topics are first aligned
# over the union vocabulary with a tiny smoothing mass (keeps KL finite).
scores = rank_attack_topics(model_a, model_b, epsilon=1e-12)

print("event topics by novelty (top 5 and bottom 3):")
for s in scores[:5]:
    print(f"  skl={s.skl:8.3f}  topic {s.topic_index:2d}  "
          f"closest baseline topic {s.matched_baseline_index:2d}  "
          f"{' '.join(top_tokens(model_a, s.topic_index, 5))}")
print("  ...")
for s in scores[-3:]:
    print(f"  skl={s.skl:8.3f}  topic {s.topic_index:2d}  "
          f"closest baseline topic {s.matched_baseline_index:2d}  "
          f"{' '.join(top_tokens(model_a, s.topic_index, 5))}")

novel = [s for s in scores[:5]
         if any(t.startswith("atk") for t in top_tokens(model_a, s.topic_index, 5))]
print(f"\n{len(novel)} of the top 5 novelty topics carry attack vocabulary")
