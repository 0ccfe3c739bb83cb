#!/usr/bin/env python3
# Tokenization and corpus ingestion.
#
# Everything downstream works on token lists, so this walkthrough shows
# exactly what the tokenizer keeps and drops, then round-trips a small
# corpus file in the line-delimited JSON ingestion format.

import json
import tempfile
from pathlib import Path

from doswatch import DEFAULT_STOPWORDS, TokenizerConfig, WindowTag, load_corpus, preprocess

# --- the tokenizer ---------------------------------------------------------
# Lowercase, split on whitespace, strip edge punctuation (keeping '#'/'@'),
# keep URLs whole, drop stopwords.

samples = [
    "Death to Bank of America!!!! RIP my Hello Kitty card...",
    "Can't sign into my account after hackers infiltrated some accounts.",
    "u.s. bancorp, pnc latest bank websites to face access issues http://bit.ly/p5xpmz",
    "@pncvwallet nothing pnc sucks fat d",
]

for text in samples:
    print(f"  raw: {text}")
    print(f"  tokens: {preprocess(text)}")
    print()

# The stopword list is overridable; entity names are a common addition
# because they appear in every tweet of a collection window.
custom = TokenizerConfig(stopwords=DEFAULT_STOPWORDS | {"bank", "america", "pnc"})
print("with entity names stopworded:")
print(" ", preprocess(samples[0], custom))
print()

# --- corpus files ----------------------------------------------------------
# One JSON object per line: required "text", optional "id" and "label".

records = [
    {"text": "bank of america website is down again", "label": "attack"},
    {"text": "should i get an account with bank of america or wells fargo?",
     "label": "non_attack"},
    {"id": "tw-3", "text": "prolonged site slowdown reported by users"},
]

with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "window.jsonl"
    path.write_text("\n".join(json.dumps(r) for r in records), encoding="utf-8")
    corpus = load_corpus(path, WindowTag.EVENT)

print(f"loaded {len(corpus)} tweets into a {corpus.window_tag.value} window")
for tweet in corpus:
    print(f"  {tweet.id:>4}  label={tweet.label.value:<10}  tokens={list(tweet.tokens)}")
