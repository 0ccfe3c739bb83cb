"""Tweet ingestion, tokenization and window partitioning."""

from __future__ import annotations

import json
import unicodedata
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

__all__ = [
    "Label",
    "WindowTag",
    "Tweet",
    "Corpus",
    "TokenizerConfig",
    "DEFAULT_STOPWORDS",
    "preprocess",
    "load_corpus",
    "load_stopwords",
    "CorpusFormatError",
]

# Standard English stopword list (the classic ~175-word list), all lowercase.
# Overridable per run via TokenizerConfig / load_stopwords.
DEFAULT_STOPWORDS: frozenset[str] = frozenset([
    "i", "me", "my", "myself", "we", "our", "ours", "ourselves", "you",
    "you're", "you've", "you'll", "you'd", "your", "yours", "yourself",
    "yourselves", "he", "him", "his", "himself", "she", "she's", "her",
    "hers", "herself", "it", "it's", "its", "itself", "they", "them",
    "their", "theirs", "themselves", "what", "which", "who", "whom",
    "this", "that", "that'll", "these", "those", "am", "is", "are", "was",
    "were", "be", "been", "being", "have", "has", "had", "having", "do",
    "does", "did", "doing", "a", "an", "the", "and", "but", "if", "or",
    "because", "as", "until", "while", "of", "at", "by", "for", "with",
    "about", "against", "between", "into", "through", "during", "before",
    "after", "above", "below", "to", "from", "up", "down", "in", "out",
    "on", "off", "over", "under", "again", "further", "then", "once",
    "here", "there", "when", "where", "why", "how", "all", "any", "both",
    "each", "few", "more", "most", "other", "some", "such", "no", "nor",
    "not", "only", "own", "same", "so", "than", "too", "very", "s", "t",
    "can", "will", "just", "don", "don't", "should", "should've", "now",
    "d", "ll", "m", "o", "re", "ve", "y", "ain", "aren", "aren't",
    "couldn", "couldn't", "didn", "didn't", "doesn", "doesn't", "hadn",
    "hadn't", "hasn", "hasn't", "haven", "haven't", "isn", "isn't", "ma",
    "mightn", "mightn't", "mustn", "mustn't", "needn", "needn't", "shan",
    "shan't", "shouldn", "shouldn't", "wasn", "wasn't", "weren",
    "weren't", "won", "won't", "wouldn", "wouldn't",
])

# Characters kept at token edges; everything else is stripped from the
# leading/trailing ends (internal punctuation such as apostrophes stays).
_EDGE_KEEP = ("#", "@")


class Label(Enum):
    ATTACK = "attack"
    NON_ATTACK = "non_attack"
    UNLABELED = "unlabeled"


class WindowTag(Enum):
    BASELINE = "baseline"
    EVENT = "event"


class CorpusFormatError(ValueError):
    """Raised when an input corpus file does not match the expected format."""


@dataclass(frozen=True)
class TokenizerConfig:
    """Knobs for the tweet tokenizer.

    ``stopwords`` must be lowercase; the constructor case-folds them so the
    no-stopword invariant on tokens cannot be dodged by mixed-case entries.
    """

    stopwords: frozenset[str] = DEFAULT_STOPWORDS
    keep_urls: bool = True
    strip_punctuation: bool = True

    def __post_init__(self):
        folded = frozenset(w.casefold() for w in self.stopwords)
        object.__setattr__(self, "stopwords", folded)


@dataclass(frozen=True)
class Tweet:
    id: str
    raw_text: str
    tokens: tuple[str, ...]
    label: Label = Label.UNLABELED


@dataclass(frozen=True)
class Corpus:
    tweets: tuple[Tweet, ...]
    window_tag: WindowTag

    def __len__(self) -> int:
        return len(self.tweets)

    def __iter__(self):
        return iter(self.tweets)


def _is_url(token: str) -> bool:
    return token.startswith("http://") or token.startswith("https://")


def _strip_edges(token: str) -> str:
    start, end = 0, len(token)
    while start < end:
        c = token[start]
        if c.isalnum() or c in _EDGE_KEEP:
            break
        start += 1
    while end > start:
        c = token[end - 1]
        if c.isalnum() or c in _EDGE_KEEP:
            break
        end -= 1
    return token[start:end]


def preprocess(raw_text: str, cfg: TokenizerConfig | None = None) -> list[str]:
    """Turn raw tweet text into the token list used everywhere downstream.

    NFC-normalize, case-fold, split on whitespace, keep URLs verbatim
    (or drop them when ``cfg.keep_urls`` is false), strip leading/trailing
    characters that are not letters, digits, '#' or '@', then drop
    stopwords. Deterministic and order-preserving; degenerate input yields
    an empty list.
    """
    if cfg is None:
        cfg = TokenizerConfig()
    text = unicodedata.normalize("NFC", raw_text).casefold()
    tokens: list[str] = []
    for piece in text.split():
        if _is_url(piece):
            if cfg.keep_urls:
                tokens.append(piece)
            continue
        if cfg.strip_punctuation:
            piece = _strip_edges(piece)
        if piece and piece not in cfg.stopwords:
            tokens.append(piece)
    return tokens


_LABEL_VALUES = {
    "attack": Label.ATTACK,
    "non_attack": Label.NON_ATTACK,
}


def _parse_record(line: str, line_no: int, cfg: TokenizerConfig) -> Tweet:
    try:
        record = json.loads(line)
    except json.JSONDecodeError as exc:
        raise CorpusFormatError(f"line {line_no}: invalid JSON ({exc.msg})") from exc
    if not isinstance(record, dict):
        raise CorpusFormatError(f"line {line_no}: record must be an object")
    text = record.get("text")
    if not isinstance(text, str):
        raise CorpusFormatError(f"line {line_no}: missing or non-string 'text' field")
    tweet_id = record.get("id", str(line_no))
    if not isinstance(tweet_id, str):
        raise CorpusFormatError(f"line {line_no}: 'id' must be a string")
    label = Label.UNLABELED
    if "label" in record:
        raw_label = record["label"]
        if raw_label not in _LABEL_VALUES:
            raise CorpusFormatError(
                f"line {line_no}: unknown label {raw_label!r} "
                "(expected 'attack' or 'non_attack')"
            )
        label = _LABEL_VALUES[raw_label]
    return Tweet(
        id=tweet_id,
        raw_text=text,
        tokens=tuple(preprocess(text, cfg)),
        label=label,
    )


def load_corpus(
    path: str | Path,
    window_tag: WindowTag,
    cfg: TokenizerConfig | None = None,
) -> Corpus:
    """Load a line-delimited JSON corpus file into a preprocessed Corpus.

    Each line is an object with required "text", optional "id" and optional
    "label" ('attack' | 'non_attack'). Blank lines are skipped. A malformed
    record raises CorpusFormatError naming the offending line; an empty
    file raises "empty corpus".
    """
    if cfg is None:
        cfg = TokenizerConfig()
    path = Path(path)
    tweets: list[Tweet] = []
    with path.open("r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            tweets.append(_parse_record(line, line_no, cfg))
    if not tweets:
        raise CorpusFormatError(f"empty corpus: {path}")
    return Corpus(tweets=tuple(tweets), window_tag=window_tag)


def load_stopwords(path: str | Path) -> frozenset[str]:
    """Read a one-word-per-line stopword override file (UTF-8, case-folded)."""
    words = []
    with Path(path).open("r", encoding="utf-8") as fh:
        for line in fh:
            word = line.strip().casefold()
            if word:
                words.append(word)
    return frozenset(words)
