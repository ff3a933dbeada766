from __future__ import annotations

from typing import Sequence

import numpy as np

from ..errors import LengthMismatch
from .cluster import ClusterResult
from .split import SplitSpec, stratified_split
from .svm import SvmConfig, predict, train_linear_svm


def one_hot_clusters(*results: ClusterResult) -> np.ndarray:
    """Concatenated one-hot encodings of each clustering's ids (M x sum(k))."""
    blocks = []
    for res in results:
        block = np.zeros((len(res.assignments), res.k))
        block[np.arange(len(res.assignments)), np.asarray(res.assignments, dtype=int)] = 1.0
        blocks.append(block)
    return np.hstack(blocks)


def combine_dual_clustering(
    numeric: ClusterResult,
    wordset: ClusterResult,
    labels: Sequence[str],
    split: SplitSpec = SplitSpec(),
    svm: SvmConfig = SvmConfig(),
    ids: Sequence[str] | None = None,
):
    """Classify documents from the pair of cluster ids each one received.

    Returns ``(test_ids, truth, predictions)`` for the held-out split.
    """
    m = len(labels)
    if len(numeric.assignments) != m or len(wordset.assignments) != m:
        raise LengthMismatch("both clusterings must cover the same documents")
    ids = list(ids) if ids is not None else [str(i) for i in range(m)]
    X = one_hot_clusters(numeric, wordset)
    train_ids, test_ids = stratified_split(ids, labels, split)
    pos = {d: i for i, d in enumerate(ids)}
    tr = [pos[d] for d in train_ids]
    te = [pos[d] for d in test_ids]
    model = train_linear_svm(X[tr], [labels[i] for i in tr], svm)
    return test_ids, [labels[i] for i in te], predict(model, X[te])
