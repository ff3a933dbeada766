"""Per-document skip-gram word embeddings trained with negative sampling.

The update loop follows the classic word2vec recipe: for every centre
position a reduced window is drawn, each (centre, context) pair is trained
against the centre word as the positive target plus ``negatives`` words
drawn from the unigram distribution raised to 0.75, and the learning rate
decays linearly over all epochs. Everything is driven by one seeded
generator, so identical inputs produce identical bytes.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np
from numba import njit

from .corpus import TokenSeq, term_stats
from .errors import LengthMismatch, UnknownWord, VocabularyEmpty, ZeroVector

_MAX_EXP = 6.0
_LCG_MUL = np.uint64(25214903917)
_LCG_ADD = np.uint64(11)


@dataclass(frozen=True)
class EmbeddingHyperparams:
    dimension: int = 100
    window: int = 5
    negatives: int = 5
    # None: max(5, ceil(100000 / total_tokens)), so short texts still see enough updates
    epochs: Optional[int] = None
    initial_learning_rate: float = 0.025
    min_learning_rate: float = 1e-4
    min_count: int = 1
    seed: int = 1

    def __post_init__(self):
        if self.dimension < 2:
            raise ValueError("dimension must be >= 2")
        if self.window < 1:
            raise ValueError("window must be >= 1")
        if self.negatives < 1:
            raise ValueError("negatives must be >= 1")
        if self.epochs is not None and self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if self.min_count < 1:
            raise ValueError("min_count must be >= 1")
        if not self.initial_learning_rate > 0:
            raise ValueError("initial_learning_rate must be positive")

    def resolved_epochs(self, total_tokens: int) -> int:
        if self.epochs is not None:
            return self.epochs
        return max(5, math.ceil(100_000 / max(total_tokens, 1)))

    def digest(self) -> str:
        blob = json.dumps(asdict(self), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]


@dataclass(frozen=True)
class EmbeddingModel:
    """Word vectors for one document.

    ``words`` is ordered by frequency rank, which doubles as the tie-break
    order for similarity queries.
    """

    words: tuple[str, ...]
    vectors: np.ndarray
    hyperparams: EmbeddingHyperparams

    def __post_init__(self):
        if not self.words:
            raise VocabularyEmpty("embedding model has no words")
        if self.vectors.shape != (len(self.words), self.hyperparams.dimension):
            raise LengthMismatch(
                f"vectors shape {self.vectors.shape} does not match "
                f"{len(self.words)} words x {self.hyperparams.dimension} dims"
            )
        object.__setattr__(self, "_index", {w: i for i, w in enumerate(self.words)})

    @property
    def vocab(self) -> frozenset[str]:
        return frozenset(self.words)

    def index(self, word: str) -> int:
        try:
            return self._index[word]
        except KeyError:
            raise UnknownWord(word) from None

    def __contains__(self, word: str) -> bool:
        return word in self._index

    def vector(self, word: str) -> np.ndarray:
        return self.vectors[self.index(word)]

    def to_json(self, tokens_digest: str = "") -> str:
        return json.dumps(
            {
                "hyperparams": asdict(self.hyperparams),
                "hyperparams_hash": self.hyperparams.digest(),
                "tokens_digest": tokens_digest,
                "words": list(self.words),
                # repr of a float64 round-trips exactly
                "vectors": [[float(x) for x in row] for row in self.vectors],
            },
            ensure_ascii=False,
        )

    @classmethod
    def from_json(cls, text: str) -> "EmbeddingModel":
        data = json.loads(text)
        hp = EmbeddingHyperparams(**data["hyperparams"])
        vectors = np.asarray(data["vectors"], dtype=np.float64).reshape(
            len(data["words"]), hp.dimension
        )
        return cls(words=tuple(data["words"]), vectors=vectors, hyperparams=hp)


def tokens_digest(tokens: TokenSeq | Sequence[str]) -> str:
    seq = tokens.tokens if isinstance(tokens, TokenSeq) else tuple(tokens)
    h = hashlib.sha256()
    for tok in seq:
        h.update(tok.encode("utf-8"))
        h.update(b"\x00")
    return h.hexdigest()[:16]


@njit(cache=True, nogil=True)
def _lcg_next(state):
    return state * _LCG_MUL + _LCG_ADD


@njit(cache=True, nogil=True)
def _uniform(state):
    # top 53 bits -> [0, 1)
    return float(state >> np.uint64(11)) / 9007199254740992.0


@njit(cache=True, nogil=True)
def _train_epoch(
    ids, syn0, syn1neg, neg_cdf, window, negatives, alpha0, alpha_min,
    done_before, total_work, rng_state,
):
    n = ids.shape[0]
    dim = syn0.shape[1]
    neu1e = np.zeros(dim)
    n_vocab = neg_cdf.shape[0]
    for pos in range(n):
        progress = (done_before + pos) / total_work
        alpha = alpha0 - (alpha0 - alpha_min) * progress
        if alpha < alpha_min:
            alpha = alpha_min
        rng_state = _lcg_next(rng_state)
        b = int(rng_state % np.uint64(window))
        span = window - b
        centre = ids[pos]
        for off in range(-span, span + 1):
            if off == 0:
                continue
            c = pos + off
            if c < 0 or c >= n:
                continue
            ctx = ids[c]
            for j in range(dim):
                neu1e[j] = 0.0
            for d in range(negatives + 1):
                if d == 0:
                    target = centre
                    label = 1.0
                else:
                    rng_state = _lcg_next(rng_state)
                    u = _uniform(rng_state)
                    target = np.searchsorted(neg_cdf, u, side="right")
                    if target >= n_vocab:
                        target = n_vocab - 1
                    if target == centre:
                        continue
                    label = 0.0
                f = 0.0
                for j in range(dim):
                    f += syn0[ctx, j] * syn1neg[target, j]
                if f > _MAX_EXP:
                    g = (label - 1.0) * alpha
                elif f < -_MAX_EXP:
                    g = label * alpha
                else:
                    g = (label - 1.0 / (1.0 + math.exp(-f))) * alpha
                for j in range(dim):
                    neu1e[j] += g * syn1neg[target, j]
                for j in range(dim):
                    syn1neg[target, j] += g * syn0[ctx, j]
            for j in range(dim):
                syn0[ctx, j] += neu1e[j]
    return rng_state


def train_embedding(
    tokens: TokenSeq | Sequence[str],
    hp: EmbeddingHyperparams = EmbeddingHyperparams(),
) -> EmbeddingModel:
    """Train a skip-gram negative-sampling model on a single document."""
    seq = tokens.tokens if isinstance(tokens, TokenSeq) else tuple(tokens)
    if not seq:
        raise VocabularyEmpty("no tokens to train on")
    stats = term_stats(seq)
    words = [w for w in stats.words_by_rank() if stats.freq[w] >= hp.min_count]
    if not words:
        raise VocabularyEmpty(f"no word reaches min_count={hp.min_count}")
    index = {w: i for i, w in enumerate(words)}
    ids = np.fromiter((index[t] for t in seq if t in index), dtype=np.int64)

    counts = np.array([stats.freq[w] for w in words], dtype=np.float64)
    weights = counts ** 0.75
    neg_cdf = np.cumsum(weights / weights.sum())
    neg_cdf[-1] = 1.0

    dim = hp.dimension
    init_rng = np.random.default_rng(hp.seed)
    syn0 = (init_rng.random((len(words), dim)) - 0.5) / dim
    syn1neg = np.zeros((len(words), dim))

    epochs = hp.resolved_epochs(len(ids))
    total_work = float(max(epochs * len(ids), 1))
    rng_state = np.uint64(hp.seed & 0xFFFFFFFFFFFFFFFF)
    for epoch in range(epochs):
        rng_state = _train_epoch(
            ids, syn0, syn1neg, neg_cdf, hp.window, hp.negatives,
            hp.initial_learning_rate, hp.min_learning_rate,
            float(epoch * len(ids)), total_work, np.uint64(rng_state),
        )
        if not np.isfinite(syn0).all():
            raise FloatingPointError(f"non-finite embedding after epoch {epoch + 1}")
    return EmbeddingModel(words=tuple(words), vectors=syn0, hyperparams=hp)


def cosine(u: Sequence[float] | np.ndarray, v: Sequence[float] | np.ndarray) -> float:
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape:
        raise LengthMismatch(f"{u.shape} vs {v.shape}")
    nu, nv = np.linalg.norm(u), np.linalg.norm(v)
    if nu == 0 or nv == 0:
        raise ZeroVector("cosine of a zero vector is undefined")
    return float(np.clip(np.dot(u, v) / (nu * nv), -1.0, 1.0))


def top_k_similar(
    model: EmbeddingModel,
    word: str,
    K: int,
    candidates: Optional[Iterable[str]] = None,
) -> list[tuple[str, float]]:
    """The ``K`` candidates most cosine-similar to ``word``, best first.

    Equal similarities are ordered by frequency rank. Candidates with a zero
    vector have no defined similarity and are skipped; a zero query vector
    yields an empty list.
    """
    if K < 1:
        raise ValueError("K must be positive")
    qi = model.index(word)
    if candidates is None:
        cand_idx = [i for i in range(len(model.words)) if i != qi]
    else:
        cand_idx = sorted({model.index(c) for c in candidates} - {qi})
    if not cand_idx:
        return []
    q = model.vectors[qi]
    qn = np.linalg.norm(q)
    if qn == 0:
        return []
    idx = np.asarray(cand_idx, dtype=np.int64)
    mat = model.vectors[idx]
    norms = np.linalg.norm(mat, axis=1)
    keep = norms > 0
    idx, mat, norms = idx[keep], mat[keep], norms[keep]
    sims = np.clip((mat @ q) / (norms * qn), -1.0, 1.0)
    order = np.lexsort((idx, -sims))[:K]
    return [(model.words[idx[o]], float(sims[o])) for o in order]


class EmbeddingCache:
    """One JSON file per document, invalidated when inputs change."""

    def __init__(self, directory: str | Path):
        self.directory = Path(directory)

    def _path(self, key: str) -> Path:
        return self.directory / f"{key}.json"

    def load(self, key: str, hp: EmbeddingHyperparams, digest: str) -> Optional[EmbeddingModel]:
        path = self._path(key)
        if not path.exists():
            return None
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError):
            return None
        if data.get("hyperparams_hash") != hp.digest() or data.get("tokens_digest") != digest:
            return None
        return EmbeddingModel.from_json(json.dumps(data))

    def store(self, key: str, model: EmbeddingModel, digest: str) -> Path:
        self.directory.mkdir(parents=True, exist_ok=True)
        path = self._path(key)
        path.write_text(model.to_json(digest), encoding="utf-8")
        return path
