"""k-means and Jaccard-similarity spectral clustering."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from ..errors import EmptyWordSet, TooFewSamples


@dataclass(frozen=True)
class KMeansConfig:
    restarts: int = 10
    max_iter: int = 300
    tol: float = 1e-6
    seed: int = 0


@dataclass
class ClusterResult:
    assignments: np.ndarray
    k: int
    inertia: Optional[float] = None
    centroids: Optional[np.ndarray] = None
    history: Optional[list[float]] = None

    def as_labels(self) -> list[int]:
        return [int(a) for a in self.assignments]


def _plus_plus_init(X: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = X.shape[0]
    centres = [X[rng.integers(n)]]
    d2 = ((X - centres[0]) ** 2).sum(axis=1)
    for _ in range(1, k):
        total = d2.sum()
        if total <= 0:
            idx = int(rng.integers(n))
        else:
            idx = int(np.searchsorted(np.cumsum(d2), rng.random() * total, side="right"))
            idx = min(idx, n - 1)
        centres.append(X[idx])
        d2 = np.minimum(d2, ((X - X[idx]) ** 2).sum(axis=1))
    return np.array(centres, dtype=np.float64)


def _assign(X: np.ndarray, centroids: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    d2 = ((X[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
    labels = np.argmin(d2, axis=1)
    return labels, d2[np.arange(X.shape[0]), labels]


def _lloyd(X: np.ndarray, centroids: np.ndarray, max_iter: int, tol: float):
    k = centroids.shape[0]
    history = []
    labels, dist = _assign(X, centroids)
    for _ in range(max_iter):
        history.append(float(dist.sum()))
        new = centroids.copy()
        for j in range(k):
            members = labels == j
            if members.any():
                new[j] = X[members].mean(axis=0)
            else:
                # re-seed an empty cluster at the worst-served point
                far = int(np.argmax(dist))
                new[j] = X[far]
                dist[far] = 0.0
        shift = float(np.sqrt(((new - centroids) ** 2).sum(axis=1)).max())
        centroids = new
        labels, dist = _assign(X, centroids)
        if shift < tol:
            break
    history.append(float(dist.sum()))
    return labels, centroids, float(dist.sum()), history


def kmeans(X, k: int, config: KMeansConfig = KMeansConfig()) -> ClusterResult:
    """Best-of-``restarts`` Lloyd's algorithm from k-means++ seeds.

    Restart seeds are spawned from ``config.seed``; equal inertia keeps the
    earliest restart.
    """
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise ValueError("X must be 2-D")
    n = X.shape[0]
    if k < 1 or k > n:
        raise TooFewSamples(f"cannot form {k} clusters from {n} rows")
    best = None
    for child in np.random.SeedSequence(config.seed).spawn(max(config.restarts, 1)):
        rng = np.random.default_rng(child)
        init = _plus_plus_init(X, k, rng)
        labels, centroids, inertia, history = _lloyd(X, init, config.max_iter, config.tol)
        if best is None or inertia < best.inertia:
            best = ClusterResult(labels, k, inertia, centroids, history)
    return best


def jaccard(a: Iterable[str], b: Iterable[str]) -> float:
    a, b = set(a), set(b)
    union = a | b
    if not union:
        raise EmptyWordSet("Jaccard similarity of two empty sets")
    return len(a & b) / len(union)


def jaccard_matrix(word_sets: Sequence[Iterable[str]]) -> np.ndarray:
    sets = [frozenset(s) for s in word_sets]
    for i, s in enumerate(sets):
        if not s:
            raise EmptyWordSet(f"word set {i} is empty")
    m = len(sets)
    S = np.eye(m)
    for i in range(m):
        for j in range(i + 1, m):
            S[i, j] = S[j, i] = len(sets[i] & sets[j]) / len(sets[i] | sets[j])
    return S


def spectral_embedding(S: np.ndarray, k: int) -> np.ndarray:
    """Row-normalized eigenvectors of the k smallest eigenvalues of I - D^-1/2 S D^-1/2."""
    S = np.asarray(S, dtype=np.float64)
    deg = S.sum(axis=1)
    inv_sqrt = np.where(deg > 0, 1.0 / np.sqrt(np.where(deg > 0, deg, 1.0)), 0.0)
    L = np.eye(S.shape[0]) - inv_sqrt[:, None] * S * inv_sqrt[None, :]
    L = (L + L.T) / 2.0
    _, vecs = np.linalg.eigh(L)
    U = vecs[:, :k]
    norms = np.linalg.norm(U, axis=1, keepdims=True)
    return np.where(norms > 0, U / np.where(norms > 0, norms, 1.0), 0.0)


def spectral_cluster(S: np.ndarray, k: int, seed: int = 0,
                     config: Optional[KMeansConfig] = None) -> ClusterResult:
    if k > S.shape[0]:
        raise TooFewSamples(f"cannot form {k} clusters from {S.shape[0]} items")
    config = config or KMeansConfig(seed=seed)
    res = kmeans(spectral_embedding(S, k), k, config)
    return ClusterResult(res.assignments, k, res.inertia)


def jaccard_spectral_cluster(word_sets: Sequence[Iterable[str]], k: int, seed: int = 0) -> ClusterResult:
    """Spectral clustering of documents by Jaccard overlap of their graph words."""
    sets = [s.word_set() if hasattr(s, "word_set") else s for s in word_sets]
    return spectral_cluster(jaccard_matrix(sets), k, seed)
