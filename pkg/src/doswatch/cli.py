"""Command-line front end.

Subcommands: detect, eval, sweep, synth, train-tree, severity. Every knob
has a default; a flat key=value config file can set any of them, with
explicit flags taking precedence.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from . import classifier, evaluation
from .corpus import TokenizerConfig, WindowTag, load_corpus, load_stopwords
from .pipeline import PipelineConfig, PipelineError, run_detect, run_eval, run_sweep
from .severity import SeverityInput, severity_level

_CONFIG_TYPES = {
    "out_dir": str,
    "topic_count_scale": float,
    "log_base": float,
    "iterations": int,
    "inference_iterations": int,
    "dirichlet_alpha": float,
    "dirichlet_beta": float,
    "seed": int,
    "epsilon": float,
    "top_x": int,
    "score_threshold": float,
    "use_tree": bool,
    "tree_file": str,
    "severity_beta": float,
    "n_user": int,
    "stopwords_file": str,
    "keep_urls": bool,
    "strip_punctuation": bool,
    "max_x": int,
    "scales": str,
    "tree_train_path": str,
    "min_leaf": int,
}

_TRUE_WORDS = {"1", "true", "yes", "on"}
_FALSE_WORDS = {"0", "false", "no", "off"}


def _parse_config_file(path: str) -> dict:
    """Read a flat key = value file; '#' starts a comment, blank lines skipped."""
    values = {}
    for line_no, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{line_no}: expected 'key = value'")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in _CONFIG_TYPES:
            raise ValueError(f"{path}:{line_no}: unknown config key {key!r}")
        caster = _CONFIG_TYPES[key]
        if caster is bool:
            lowered = value.lower()
            if lowered in _TRUE_WORDS:
                values[key] = True
            elif lowered in _FALSE_WORDS:
                values[key] = False
            else:
                raise ValueError(f"{path}:{line_no}: bad boolean {value!r}")
        else:
            values[key] = caster(value)
    return values


def _add_model_options(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("model options")
    group.add_argument("--scale", dest="topic_count_scale", type=float, default=10.0,
                       help="topic-count scale factor (default 10)")
    group.add_argument("--log-base", dest="log_base", type=float, default=10.0,
                       help="log base in the topic-count formula (default 10)")
    group.add_argument("--iterations", type=int, default=1000,
                       help="Gibbs iterations for training (default 1000)")
    group.add_argument("--inference-iterations", type=int, default=100,
                       help="Gibbs iterations per scored tweet (default 100)")
    group.add_argument("--alpha", dest="dirichlet_alpha", type=float, default=None,
                       help="document-topic prior (default 50/num_topics)")
    group.add_argument("--beta", dest="dirichlet_beta", type=float, default=0.01,
                       help="topic-word prior (default 0.01)")
    group.add_argument("--seed", type=int, default=42, help="base RNG seed (default 42)")
    group.add_argument("--epsilon", type=float, default=1e-12,
                       help="vocabulary-alignment smoothing mass (default 1e-12)")


def _add_tokenizer_options(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("tokenizer options")
    group.add_argument("--stopwords", dest="stopwords_file", default=None,
                       help="stopword override file, one word per line")
    group.add_argument("--keep-urls", dest="keep_urls",
                       action=argparse.BooleanOptionalAction, default=True,
                       help="keep URL tokens verbatim (default on)")
    group.add_argument("--strip-punctuation", dest="strip_punctuation",
                       action=argparse.BooleanOptionalAction, default=True,
                       help="strip leading/trailing punctuation (default on)")


def _build_parser() -> tuple[argparse.ArgumentParser, dict[str, argparse.ArgumentParser]]:
    parser = argparse.ArgumentParser(
        prog="doswatch",
        description="Detect and score denial-of-service events from tweet windows.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    detect = sub.add_parser("detect", help="run the full detection pipeline")
    detect.add_argument("baseline", help="baseline-window corpus (JSONL)")
    detect.add_argument("event", help="event-window corpus (JSONL)")
    detect.add_argument("-o", "--out-dir", default="doswatch_out")
    detect.add_argument("--config", default=None, help="flat key=value config file")
    detect.add_argument("--top-x", dest="top_x", type=int, default=None,
                        help="label the first x ranked tweets as attack (default 40)")
    detect.add_argument("--score-threshold", dest="score_threshold", type=float,
                        default=None,
                        help="label tweets scoring above this instead of using top-x")
    detect.add_argument("--use-tree", dest="use_tree", action="store_true",
                        default=False, help="filter the ranking with a trained tree")
    detect.add_argument("--tree-file", dest="tree_file", default=None,
                        help="tree JSON written by train-tree")
    detect.add_argument("--severity-beta", dest="severity_beta", type=float,
                        default=0.5, help="severity blend weight (default 0.5)")
    detect.add_argument("--n-user", dest="n_user", type=int, default=100_000,
                        help="audience (follower) count for severity (default 100000)")
    _add_model_options(detect)
    _add_tokenizer_options(detect)

    ev = sub.add_parser("eval", help="precision/recall and DET curves at one scale")
    ev.add_argument("baseline")
    ev.add_argument("event", help="labeled event-window corpus (JSONL)")
    ev.add_argument("-o", "--out-dir", default="doswatch_out")
    ev.add_argument("--config", default=None)
    ev.add_argument("--max-x", dest="max_x", type=int, default=100,
                    help="evaluate x = 1..max_x (default 100)")
    ev.add_argument("--use-tree", dest="use_tree", action="store_true", default=False)
    ev.add_argument("--tree-file", dest="tree_file", default=None)
    _add_model_options(ev)
    _add_tokenizer_options(ev)

    sweep = sub.add_parser("sweep", help="scale x tree parameter sweep")
    sweep.add_argument("baseline")
    sweep.add_argument("event", help="labeled event-window corpus (JSONL)")
    sweep.add_argument("-o", "--out-dir", default="doswatch_out")
    sweep.add_argument("--config", default=None)
    sweep.add_argument("--scales", default="5,6,7,8,9,10,11,12,13,14",
                       help="comma-separated scale values")
    sweep.add_argument("--max-x", dest="max_x", type=int, default=100)
    sweep.add_argument("--tree-train", dest="tree_train_path", default=None,
                       help="labeled corpus for the tree; enables the tree half "
                            "of the grid")
    _add_model_options(sweep)
    _add_tokenizer_options(sweep)

    synth = sub.add_parser("synth", help="write a synthetic baseline/event pair")
    synth.add_argument("-o", "--out-dir", default="doswatch_out")
    synth.add_argument("--n-background", type=int, default=500)
    synth.add_argument("--n-attack", type=int, default=100)
    synth.add_argument("--background-vocab-size", type=int, default=200)
    synth.add_argument("--attack-vocab-size", type=int, default=30)
    synth.add_argument("--tokens-per-doc", type=int, default=12)
    synth.add_argument("--overlap", type=float, default=0.3)
    synth.add_argument("--seed", type=int, default=7)

    tree = sub.add_parser("train-tree", help="train the bag-of-words CART filter")
    tree.add_argument("training", help="labeled corpus (JSONL)")
    tree.add_argument("-o", "--out-file", default="tree.json")
    tree.add_argument("--min-leaf", dest="min_leaf", type=int, default=4)
    _add_tokenizer_options(tree)

    sev = sub.add_parser("severity", help="compute the severity score directly")
    sev.add_argument("--n-attack", type=int, required=True)
    sev.add_argument("--n-all", type=int, required=True)
    sev.add_argument("--n-user", type=int, required=True)
    sev.add_argument("--beta", type=float, default=0.5)

    subcommands = {"detect": detect, "eval": ev, "sweep": sweep, "synth": synth,
                   "train-tree": tree, "severity": sev}
    return parser, subcommands


def _apply_config_file(subcommands: dict[str, argparse.ArgumentParser],
                       argv: list[str]) -> None:
    """Load --config values as subparser defaults so explicit flags still win.

    Defaults go on the subparsers (not the root parser) because each
    subparser fills a fresh namespace; only its own defaults matter.
    """
    probe = argparse.ArgumentParser(add_help=False)
    probe.add_argument("--config", default=None)
    known, _ = probe.parse_known_args(argv)
    if known.config:
        values = _parse_config_file(known.config)
        for sub in subcommands.values():
            sub.set_defaults(**values)


def _pipeline_config(args: argparse.Namespace) -> PipelineConfig:
    fields = {
        name: getattr(args, name)
        for name in PipelineConfig.__dataclass_fields__
        if hasattr(args, name)
    }
    if isinstance(fields.get("scales"), str):
        fields["scales"] = tuple(float(s) for s in fields["scales"].split(",") if s.strip())
    fields["baseline_path"] = args.baseline
    fields["event_path"] = args.event
    return PipelineConfig(**fields)


def _cmd_synth(args: argparse.Namespace) -> int:
    spec = evaluation.SynthSpec(
        n_background=args.n_background,
        n_attack=args.n_attack,
        background_vocab_size=args.background_vocab_size,
        attack_vocab_size=args.attack_vocab_size,
        tokens_per_doc=args.tokens_per_doc,
        overlap_fraction=args.overlap,
        seed=args.seed,
    )
    baseline, event = evaluation.generate_synthetic(spec)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for name, corpus, labeled in (("baseline.jsonl", baseline, False),
                                  ("event.jsonl", event, True)):
        path = out_dir / name
        with path.open("w", encoding="utf-8") as fh:
            for tweet in corpus:
                record = {"id": tweet.id, "text": tweet.raw_text}
                if labeled:
                    record["label"] = tweet.label.value
                fh.write(json.dumps(record, sort_keys=True, separators=(",", ":")) + "\n")
        print(f"wrote {path} ({len(corpus)} tweets)")
    return 0


def _cmd_train_tree(args: argparse.Namespace) -> int:
    cfg_kwargs = {"keep_urls": args.keep_urls, "strip_punctuation": args.strip_punctuation}
    if args.stopwords_file:
        cfg_kwargs["stopwords"] = load_stopwords(args.stopwords_file)
    corpus = load_corpus(args.training, WindowTag.EVENT, TokenizerConfig(**cfg_kwargs))
    tree, vocab = evaluation.train_filter_tree(corpus, min_leaf=args.min_leaf)
    classifier.save_tree(tree, args.out_file, vocab)
    print(f"wrote {args.out_file}")
    return 0


def _cmd_severity(args: argparse.Namespace) -> int:
    inp = SeverityInput(n_attack=args.n_attack, n_all=args.n_all,
                        n_user=args.n_user, beta=args.beta)
    print(f"volume endpoint (beta=1):   {severity_level(replace(inp, beta=1.0)):.6g}")
    print(f"audience endpoint (beta=0): {severity_level(replace(inp, beta=0.0)):.6g}")
    print(f"severity level (beta={args.beta:g}): {severity_level(inp):.6g}")
    return 0


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser, subcommands = _build_parser()
    try:
        _apply_config_file(subcommands, argv)
        args = parser.parse_args(argv)
        if args.command == "detect":
            artifacts = run_detect(_pipeline_config(args))
        elif args.command == "eval":
            artifacts = run_eval(_pipeline_config(args))
        elif args.command == "sweep":
            artifacts = run_sweep(_pipeline_config(args))
        elif args.command == "synth":
            return _cmd_synth(args)
        elif args.command == "train-tree":
            return _cmd_train_tree(args)
        else:
            return _cmd_severity(args)
    except PipelineError as exc:
        print(f"error {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for path in artifacts.values():
        print(f"wrote {path}")
    return 0


def entry() -> None:
    sys.exit(main())
