#!/usr/bin/env python3
# Benchmarking: precision/recall curves, DET points and the parameter sweep.
#
# With a labeled event window, the whole pipeline can be scored at every
# cutoff x, and the two user-facing knobs (topic-count scale, tree on/off)
# swept over a grid. All outputs land as CSV for whatever plotting tool.

import tempfile
from pathlib import Path

from doswatch import SynthSpec, det_points, generate_synthetic, parameter_sweep
from doswatch.evaluation import write_curve, write_det, write_sweep

SHAPE = dict(n_background=120, n_attack=30, background_vocab_size=50,
             attack_vocab_size=10, tokens_per_doc=10, overlap_fraction=0.2)

baseline, event = generate_synthetic(SynthSpec(seed=77, **SHAPE))
tree_training = generate_synthetic(SynthSpec(seed=88, **SHAPE))[1]

results = parameter_sweep(
    baseline, event,
    scales=[6.0, 10.0],
    xs=list(range(1, 61)),
    with_and_without_tree=True,
    tree_training=tree_training,
    iterations=400,
    inference_iterations=60,
    seed=3,
)

print("sweep cells:")
for res in results:
    tag = "tree" if res.use_tree else "plain"
    head = {p.x: p for p in res.curve}
    deep = res.curve[-1]
    print(f"  scale={res.topic_count_scale:4.1f} {tag:>5}: "
          f"p@10={head[10].precision:.3f}  r@10={head[10].recall:.3f}  "
          f"p@{deep.x}={deep.precision:.3f}  r@{deep.x}={deep.recall:.3f}")

# DET points pair the missed-detection rate (1 - recall) with a false
# positive measure (1 - precision) along the same x axis.
best = results[1].curve  # scale 6, tree on
pairs = det_points(best)
print("\nDET points for scale=6 with tree (every 15th):")
for p, (md, fp) in list(zip(best, pairs))[::15]:
    print(f"  x={p.x:3d}  missed={md:.3f}  false_positive={fp:.3f}")

with tempfile.TemporaryDirectory() as tmp:
    out = Path(tmp)
    write_curve(out / "curve.csv", results[0].curve)
    write_det(out / "det.csv", results[0].curve)
    write_sweep(out / "sweep.csv", results)
    for name in ("curve.csv", "det.csv", "sweep.csv"):
        lines = (out / name).read_text().splitlines()
        print(f"\n{name}: {len(lines) - 1} rows, e.g.")
        print("  " + "\n  ".join(lines[:3]))
