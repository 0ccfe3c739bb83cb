"""Optional CART filter over bag-of-words counts.

Trained on a manually labeled corpus, then used to drop ranked tweets that
look like non-attack chatter. Train on a different entity than the one
being filtered, or the reported precision will flatter the tree. Plain
greedy Gini tree with a minimum of 4 training samples per leaf and no other
stopping rule; trees are immutable after training and safe for concurrent
prediction.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .corpus import Label, Tweet
from .lda import Vocabulary
from .scoring import RankedTweet

__all__ = [
    "BowVector",
    "Split",
    "Leaf",
    "DecisionTree",
    "featurize",
    "train_cart",
    "predict",
    "filter_ranked",
    "save_tree",
    "load_tree",
]

TREE_FORMAT = "doswatch-cart"
TREE_FORMAT_VERSION = 1

# sparse feature-id -> count map; absent features read as 0
BowVector = dict[int, int]


@dataclass(frozen=True)
class Leaf:
    label: Label
    n_samples: int
    class_counts: tuple[int, int]  # (attack, non_attack)


@dataclass(frozen=True)
class Split:
    feature_id: int
    threshold: int  # count <= threshold goes left, > goes right
    left: "Split | Leaf"
    right: "Split | Leaf"


@dataclass(frozen=True)
class DecisionTree:
    root: Split | Leaf
    min_leaf: int
    n_features: int


def featurize(tweet: Tweet, vocab: Vocabulary) -> BowVector:
    """Token counts over the training vocabulary; unknown tokens are dropped."""
    counts: BowVector = {}
    for tok in tweet.tokens:
        fid = vocab.token_to_id.get(tok)
        if fid is not None:
            counts[fid] = counts.get(fid, 0) + 1
    return counts


def _gini(n_attack: int, n_non: int) -> float:
    n = n_attack + n_non
    if n == 0:
        return 0.0
    pa = n_attack / n
    pn = n_non / n
    return 1.0 - pa * pa - pn * pn


def _leaf(labels: list[Label]) -> Leaf:
    n_attack = sum(1 for lab in labels if lab is Label.ATTACK)
    n_non = len(labels) - n_attack
    # tie predicts NonAttack: the filter exists to suppress false positives
    label = Label.ATTACK if n_attack > n_non else Label.NON_ATTACK
    return Leaf(label=label, n_samples=len(labels), class_counts=(n_attack, n_non))


def _candidate_thresholds(values: list[int]) -> list[int]:
    distinct = sorted(set(values))
    thresholds = []
    for lo, hi in zip(distinct, distinct[1:]):
        t = (lo + hi) // 2
        if not thresholds or thresholds[-1] != t:
            thresholds.append(t)
    return thresholds


def _build(samples: list[BowVector], labels: list[Label], feature_ids: list[int],
           min_leaf: int) -> Split | Leaf:
    n = len(labels)
    n_attack = sum(1 for lab in labels if lab is Label.ATTACK)
    parent_gini = _gini(n_attack, n - n_attack)
    if parent_gini == 0.0 or n < 2 * min_leaf:
        return _leaf(labels)

    best = None  # (weighted_gini, feature_id, threshold, left_idx, right_idx)
    for fid in feature_ids:
        values = [vec.get(fid, 0) for vec in samples]
        for t in _candidate_thresholds(values):
            left_idx = [i for i, v in enumerate(values) if v <= t]
            if len(left_idx) < min_leaf or n - len(left_idx) < min_leaf:
                continue
            right_idx = [i for i, v in enumerate(values) if v > t]
            la = sum(1 for i in left_idx if labels[i] is Label.ATTACK)
            ra = n_attack - la
            weighted = (
                len(left_idx) * _gini(la, len(left_idx) - la)
                + len(right_idx) * _gini(ra, len(right_idx) - ra)
            ) / n
            if weighted < parent_gini and (best is None or weighted < best[0]):
                best = (weighted, fid, t, left_idx, right_idx)

    if best is None:
        return _leaf(labels)
    _, fid, t, left_idx, right_idx = best
    return Split(
        feature_id=fid,
        threshold=t,
        left=_build([samples[i] for i in left_idx], [labels[i] for i in left_idx],
                    feature_ids, min_leaf),
        right=_build([samples[i] for i in right_idx], [labels[i] for i in right_idx],
                     feature_ids, min_leaf),
    )


def train_cart(samples: list[tuple[BowVector, Label]], min_leaf: int = 4) -> DecisionTree:
    """Grow a binary Gini tree by greedy recursive partitioning.

    Candidate thresholds are integer-floored midpoints between consecutive
    distinct observed counts per feature; features and thresholds are
    enumerated in sorted order and the first strictly-best split wins, so
    identical samples always produce identical trees. Splitting stops when
    no candidate leaves min_leaf samples on both sides or no candidate
    reduces impurity. Leaves predict the majority label, ties NonAttack.
    """
    if not samples:
        raise ValueError("training sample list is empty")
    if min_leaf < 1:
        raise ValueError("min_leaf must be >= 1")
    vectors = [vec for vec, _ in samples]
    labels = []
    for _, lab in samples:
        if lab not in (Label.ATTACK, Label.NON_ATTACK):
            raise ValueError("training labels must be Attack or NonAttack")
        labels.append(lab)
    feature_ids = sorted({fid for vec in vectors for fid in vec})
    root = _build(vectors, labels, feature_ids, min_leaf)
    n_features = feature_ids[-1] + 1 if feature_ids else 0
    return DecisionTree(root=root, min_leaf=min_leaf, n_features=n_features)


def predict(tree: DecisionTree, vec: BowVector) -> Label:
    """Root-to-leaf walk; features absent from the vector count as 0."""
    node = tree.root
    while isinstance(node, Split):
        node = node.left if vec.get(node.feature_id, 0) <= node.threshold else node.right
    return node.label


def filter_ranked(ranked: list[RankedTweet], tree: DecisionTree,
                  vocab: Vocabulary) -> list[RankedTweet]:
    """Keep only ranked tweets the tree predicts Attack, preserving order."""
    return [
        rt for rt in ranked
        if predict(tree, featurize(rt.tweet, vocab)) is Label.ATTACK
    ]


def _node_to_json(node: Split | Leaf) -> dict:
    if isinstance(node, Leaf):
        return {
            "kind": "leaf",
            "label": node.label.value,
            "n_samples": node.n_samples,
            "class_counts": list(node.class_counts),
        }
    return {
        "kind": "split",
        "feature_id": node.feature_id,
        "threshold": node.threshold,
        "left": _node_to_json(node.left),
        "right": _node_to_json(node.right),
    }


def _node_from_json(data: dict) -> Split | Leaf:
    if data["kind"] == "leaf":
        return Leaf(
            label=Label(data["label"]),
            n_samples=data["n_samples"],
            class_counts=tuple(data["class_counts"]),
        )
    return Split(
        feature_id=data["feature_id"],
        threshold=data["threshold"],
        left=_node_from_json(data["left"]),
        right=_node_from_json(data["right"]),
    )


def save_tree(tree: DecisionTree, path: str | Path,
              vocab: Vocabulary | None = None) -> None:
    """Persist tree (and optionally its feature vocabulary) as versioned JSON."""
    payload = {
        "format": TREE_FORMAT,
        "version": TREE_FORMAT_VERSION,
        "min_leaf": tree.min_leaf,
        "n_features": tree.n_features,
        "root": _node_to_json(tree.root),
    }
    if vocab is not None:
        payload["vocabulary"] = vocab.id_to_token
    Path(path).write_text(
        json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n",
        encoding="utf-8",
    )


def load_tree(path: str | Path) -> tuple[DecisionTree, Vocabulary | None]:
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    if payload.get("format") != TREE_FORMAT:
        raise ValueError(f"not a decision-tree file: {path}")
    if payload.get("version") != TREE_FORMAT_VERSION:
        raise ValueError(f"unsupported tree version {payload.get('version')}")
    tree = DecisionTree(
        root=_node_from_json(payload["root"]),
        min_leaf=payload["min_leaf"],
        n_features=payload["n_features"],
    )
    vocab = None
    if "vocabulary" in payload:
        vocab = Vocabulary(payload["vocabulary"])
    return tree, vocab
