"""Per-feature discriminative power: one-way ANOVA F and chi-square."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from ..errors import SingleClass
from .matrix import FeatureMatrix
from .text import chi_square_scores


def anova_f(X: np.ndarray, y: Sequence[str]) -> np.ndarray:
    """One-way ANOVA F statistic of every column of ``X`` against ``y``.

    Zero within-group variance gives ``inf`` when the group means differ
    and 0 when they do not.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y)
    classes = sorted(set(y.tolist()))
    k, n = len(classes), X.shape[0]
    if k < 2:
        raise SingleClass("ANOVA needs at least two classes")
    grand = X.mean(axis=0)
    ss_between = np.zeros(X.shape[1])
    ss_within = np.zeros(X.shape[1])
    for c in classes:
        group = X[y == c]
        mean = group.mean(axis=0)
        ss_between += len(group) * (mean - grand) ** 2
        ss_within += ((group - mean) ** 2).sum(axis=0)
    df_between, df_within = k - 1, n - k
    # float noise below this is treated as exactly zero variance
    eps = 1e-12 * np.maximum(1.0, np.abs(X).max(axis=0)) ** 2
    between = np.where(ss_between > eps, ss_between, 0.0)
    within = np.where(ss_within > eps, ss_within, 0.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        if df_within > 0:
            f = (between / df_between) / (within / df_within)
        else:
            f = np.where(between > 0, np.inf, 0.0)
    f = np.where((between > 0) & (within == 0), np.inf, f)
    f = np.where(between == 0, 0.0, f)
    return f


def anova_f_rank(X: FeatureMatrix | np.ndarray, y: Sequence[str],
                 names: Sequence[str] | None = None) -> list[tuple[str, float]]:
    """Features ordered by descending F; ties keep layout order."""
    if isinstance(X, FeatureMatrix):
        names = X.names
        X = X.values
    if names is None:
        names = [f"f{i}" for i in range(np.asarray(X).shape[1])]
    f = anova_f(X, y)
    order = np.argsort(-f, kind="stable")
    return [(names[i], float(f[i])) for i in order]


def chi_square_rank(X: FeatureMatrix, y: Sequence[str]) -> list[tuple[str, float]]:
    """Chi-square of non-zero presence per feature, used to cross-check ANOVA."""
    scores = chi_square_scores(X.values != 0, y)
    order = np.argsort(-scores, kind="stable")
    return [(X.names[i], float(scores[i])) for i in order]
