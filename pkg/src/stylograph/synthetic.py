"""Seeded synthetic corpora of stylistically distinct "authors".

Each author owns a Zipf-ranked vocabulary, a share of which is common to all
authors. Style differs in two ways: the Zipf exponent (how concentrated the
vocabulary is) and a collocation habit, i.e. the probability that the next
word is drawn from a small set of preferred successors of the current word.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .corpus import Corpus, corpus_from_texts

_LETTERS = "abcdefghijklmnopqrstuvwxyz"


@dataclass(frozen=True)
class AuthorStyle:
    zipf_exponent: float
    collocation_rate: float
    successors: int = 3


DEFAULT_STYLES = (AuthorStyle(1.0, 0.10), AuthorStyle(1.2, 0.35))


def _pseudo_words(n: int, rng: np.random.Generator) -> list[str]:
    words: list[str] = []
    seen: set[str] = set()
    while len(words) < n:
        length = int(rng.integers(2, 9))
        w = "".join(_LETTERS[i] for i in rng.integers(0, 26, size=length))
        if w not in seen:
            seen.add(w)
            words.append(w)
    return words


def _author_vocabularies(n_authors, vocab_size, shared_fraction, rng):
    n_shared = int(round(shared_fraction * vocab_size))
    n_private = vocab_size - n_shared
    pool = _pseudo_words(n_shared + n_authors * n_private, rng)
    shared = pool[:n_shared]
    vocabs = []
    for a in range(n_authors):
        private = pool[n_shared + a * n_private : n_shared + (a + 1) * n_private]
        words = shared + private
        order = rng.permutation(len(words))
        vocabs.append([words[i] for i in order])
    return vocabs


def _generate_text(vocab, style: AuthorStyle, n_tokens: int, succ: np.ndarray,
                   rng: np.random.Generator) -> str:
    ranks = np.arange(1, len(vocab) + 1, dtype=np.float64)
    p = ranks ** -style.zipf_exponent
    p /= p.sum()
    draws = rng.choice(len(vocab), size=n_tokens, p=p)
    colloc = rng.random(n_tokens) < style.collocation_rate
    pick = rng.integers(0, succ.shape[1], size=n_tokens)
    ids = np.empty(n_tokens, dtype=np.int64)
    ids[0] = draws[0]
    for i in range(1, n_tokens):
        ids[i] = succ[ids[i - 1], pick[i]] if colloc[i] else draws[i]
    words = [vocab[i] for i in ids]
    # sentence breaks every 8-20 words so the stylometry splitter has work
    out, since = [], 0
    stop = int(rng.integers(8, 21))
    for w in words:
        out.append(w)
        since += 1
        if since >= stop:
            out[-1] += "."
            since, stop = 0, int(rng.integers(8, 21))
    return " ".join(out)


def synthetic_texts(
    docs_per_author: int = 40,
    tokens_per_doc: int = 3000,
    vocab_size: int = 1000,
    shared_fraction: float = 0.3,
    styles: Sequence[AuthorStyle] = DEFAULT_STYLES,
    seed: int = 0,
) -> tuple[list[str], list[str], list[str]]:
    """Return ``(doc_ids, texts, authors)`` with authors interleaved."""
    rng = np.random.default_rng(seed)
    vocabs = _author_vocabularies(len(styles), vocab_size, shared_fraction, rng)
    succ = [rng.integers(0, vocab_size, size=(vocab_size, s.successors)) for s in styles]
    doc_ids, texts, authors = [], [], []
    for d in range(docs_per_author):
        for a, style in enumerate(styles):
            doc_ids.append(f"author{a}_doc{d:03d}")
            texts.append(_generate_text(vocabs[a], style, tokens_per_doc, succ[a], rng))
            authors.append(f"author{a}")
    return doc_ids, texts, authors


def synthetic_corpus(seed: int = 0, stopwords: Optional[set[str]] = None, **kwargs) -> Corpus:
    doc_ids, texts, authors = synthetic_texts(seed=seed, **kwargs)
    return corpus_from_texts(texts, authors=authors, genres=["synthetic"] * len(texts),
                             stopwords=stopwords, doc_ids=doc_ids)


def write_synthetic_corpus(directory: str | Path, seed: int = 0, **kwargs) -> Path:
    """Write texts plus a JSON Lines manifest; returns the manifest path."""
    directory = Path(directory)
    (directory / "texts").mkdir(parents=True, exist_ok=True)
    doc_ids, texts, authors = synthetic_texts(seed=seed, **kwargs)
    lines = []
    for doc_id, text, author in zip(doc_ids, texts, authors):
        rel = f"texts/{doc_id}.txt"
        (directory / rel).write_text(text, encoding="utf-8")
        lines.append(json.dumps({"doc_id": doc_id, "path": rel, "author": author,
                                 "genre": "synthetic", "language": "en"}))
    manifest = directory / "manifest.jsonl"
    manifest.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return manifest
