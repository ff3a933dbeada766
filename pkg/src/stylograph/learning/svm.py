"""One-vs-rest linear SVM trained with seeded Pegasos-style SGD."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..errors import DimensionMismatch, SingleClass


@dataclass(frozen=True)
class SvmConfig:
    C: float = 1.0
    epochs: int = 100
    seed: int = 0


@dataclass
class SvmModel:
    classes: list[str]
    weights: np.ndarray  # (n_classes, n_features)
    biases: np.ndarray  # (n_classes,)
    mean: np.ndarray
    scale: np.ndarray  # 1/stdev, 0 where the training column was constant
    config: SvmConfig = field(default_factory=SvmConfig)

    @property
    def n_features(self) -> int:
        return self.mean.shape[0]

    def transform(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != self.n_features:
            raise DimensionMismatch(
                f"expected {self.n_features} columns, got {X.shape[-1] if X.ndim else 0}"
            )
        return (X - self.mean) * self.scale

    def decision_function(self, X: np.ndarray) -> np.ndarray:
        return self.transform(X) @ self.weights.T + self.biases


def train_linear_svm(X_train, y_train: Sequence[str], config: SvmConfig = SvmConfig()) -> SvmModel:
    """Standardize, then fit one hinge-loss model per class.

    Each binary problem minimizes ``(lam / 2) * |w|^2 + mean(hinge)`` with
    ``lam = 1 / (C * n)``, i.e. the usual ``|w|^2 / 2 + C * sum(hinge)``
    objective rescaled. The bias is an extra, regularized weight on a
    constant input. Step sizes follow Pegasos, ``1 / (lam * t)``.
    """
    X = np.asarray(X_train, dtype=np.float64)
    y = list(y_train)
    if X.ndim != 2 or X.shape[0] != len(y):
        raise DimensionMismatch("X_train and y_train disagree in length")
    classes = sorted(set(y))
    if len(classes) < 2:
        raise SingleClass("need at least two classes to train a classifier")
    if not np.isfinite(X).all():
        raise ValueError("training rows must be finite")

    mean = X.mean(axis=0)
    std = X.std(axis=0)
    scale = np.where(std > 0, 1.0 / np.where(std > 0, std, 1.0), 0.0)
    Z = np.hstack([(X - mean) * scale, np.ones((X.shape[0], 1))])
    n, d = Z.shape

    # +1 / -1 targets, one column per class
    Y = np.where(np.asarray(y)[:, None] == np.asarray(classes)[None, :], 1.0, -1.0)
    lam = 1.0 / (config.C * n)
    W = np.zeros((len(classes), d))
    rng = np.random.default_rng(config.seed)
    t = 0
    for _ in range(config.epochs):
        for i in rng.permutation(n):
            t += 1
            eta = 1.0 / (lam * t)
            margins = Y[i] * (W @ Z[i])
            W *= 1.0 - eta * lam
            active = margins < 1.0
            if active.any():
                W[active] += eta * Y[i, active, None] * Z[i][None, :]
            # Pegasos projection onto the ball that contains the optimum
            norms = np.linalg.norm(W, axis=1)
            limit = 1.0 / np.sqrt(lam)
            over = norms > limit
            if over.any():
                W[over] *= (limit / norms[over])[:, None]
    if not np.isfinite(W).all():
        raise FloatingPointError("SVM weights diverged")
    return SvmModel(classes, W[:, :-1].copy(), W[:, -1].copy(), mean, scale, config)


def predict(model: SvmModel, X) -> list[str]:
    """Label of the largest margin; ties go to the lexicographically smallest class."""
    scores = model.decision_function(X)
    # classes are sorted and argmax returns the first maximum
    return [model.classes[i] for i in np.argmax(scores, axis=1)]
