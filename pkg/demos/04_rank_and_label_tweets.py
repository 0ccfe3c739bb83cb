#!/usr/bin/env python3
# Scoring tweets and measuring severity.
#
# Each event tweet gets a relative score: its inferred topic mixture dotted
# with the per-topic novelty scores. The top of the ranking is labeled as
# the attack set, whose size feeds the severity blend.

from doswatch import (
    LdaHyperparams,
    SeverityInput,
    SynthSpec,
    generate_synthetic,
    label_top_x,
    num_topics,
    rank_attack_topics,
    rank_tweets,
    severity_level,
    train,
)

baseline, event = generate_synthetic(
    SynthSpec(n_background=150, n_attack=40, background_vocab_size=60,
              attack_vocab_size=10, tokens_per_doc=10, overlap_fraction=0.2,
              seed=101))
model_b = train(baseline, LdaHyperparams(
    num_topics=num_topics(len(baseline), 10), iterations=400, seed=1))
model_a = train(event, LdaHyperparams(
    num_topics=num_topics(len(event), 10), iterations=400, seed=2))
topic_scores = rank_attack_topics(model_a, model_b)

ranked = rank_tweets(event, model_a, topic_scores,
                     inference_iterations=100, seed=7)

print("top 5 tweets by relative score:")
for rt in ranked[:5]:
    print(f"  #{rt.rank}  score={rt.score:7.3f}  gold={rt.tweet.label.value:<10}  "
          f"{rt.tweet.raw_text[:48]}...")

print("\nbottom 3:")
for rt in ranked[-3:]:
    print(f"  #{rt.rank}  score={rt.score:7.3f}  gold={rt.tweet.label.value}")

# Label the top x as attack tweets; x is the operator's sensitivity dial.
x = 40
attack_ids = label_top_x(ranked, x)
gold_hits = sum(1 for rt in ranked[:x] if rt.tweet.label.value == "attack")
print(f"\nlabeling the top {x}: {gold_hits}/{x} are gold attack tweets")

# Severity blends the attack share of window volume with the attack share
# of the audience (follower count, supplied by the operator).
inp = SeverityInput(n_attack=len(attack_ids), n_all=len(event),
                    n_user=308_300, beta=0.5)
print(f"\nvolume endpoint (beta=1):   {len(attack_ids)}/{len(event)} = "
      f"{severity_level(SeverityInput(inp.n_attack, inp.n_all, inp.n_user, 1.0)):.4f}")
print(f"audience endpoint (beta=0): {len(attack_ids)}/{inp.n_user} = "
      f"{severity_level(SeverityInput(inp.n_attack, inp.n_all, inp.n_user, 0.0)):.3e}")
print(f"blended severity (beta=0.5): {severity_level(inp):.4f}")
