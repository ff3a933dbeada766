"""Scoring: per-class and weighted F1, confusion matrices, Hungarian alignment."""

from __future__ import annotations

from typing import Hashable, Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from ..errors import LengthMismatch

UNMATCHED = "__unmatched__"


def per_class_scores(truth: Sequence[Hashable], pred: Sequence[Hashable]) -> dict:
    if len(truth) != len(pred):
        raise LengthMismatch(f"{len(truth)} truths vs {len(pred)} predictions")
    if not truth:
        raise LengthMismatch("empty label sequence")
    labels = sorted(set(truth) | set(pred), key=str)
    out = {}
    for c in labels:
        tp = sum(1 for t, p in zip(truth, pred) if t == c and p == c)
        n_pred = sum(1 for p in pred if p == c)
        support = sum(1 for t in truth if t == c)
        precision = tp / n_pred if n_pred else 0.0
        recall = tp / support if support else 0.0
        f1 = 2 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
        out[c] = {"precision": precision, "recall": recall, "f1": f1, "support": support}
    return out


def weighted_f1(truth: Sequence[Hashable], pred: Sequence[Hashable]) -> float:
    """Support-weighted mean of per-class F1; classes absent from ``truth`` weigh 0."""
    scores = per_class_scores(truth, pred)
    n = len(truth)
    return sum(s["f1"] * s["support"] for s in scores.values()) / n


def confusion_matrix(truth: Sequence[Hashable], pred: Sequence[Hashable]) -> dict:
    labels = sorted(set(truth) | set(pred), key=str)
    pos = {c: i for i, c in enumerate(labels)}
    m = np.zeros((len(labels), len(labels)), dtype=int)
    for t, p in zip(truth, pred):
        m[pos[t], pos[p]] += 1
    return {"labels": [str(c) for c in labels], "matrix": m.tolist()}


def contingency(pred_clusters: Sequence[Hashable], true_labels: Sequence[Hashable]):
    clusters = sorted(set(pred_clusters), key=str)
    labels = sorted(set(true_labels), key=str)
    table = np.zeros((len(clusters), len(labels)), dtype=np.int64)
    ci = {c: i for i, c in enumerate(clusters)}
    li = {c: i for i, c in enumerate(labels)}
    for p, t in zip(pred_clusters, true_labels):
        table[ci[p], li[t]] += 1
    return clusters, labels, table


def assign_max(table: np.ndarray) -> list[tuple[int, int]]:
    """Row/column pairs maximizing the summed entries of a (padded square) table."""
    table = np.asarray(table)
    size = max(table.shape)
    square = np.zeros((size, size), dtype=table.dtype)
    square[: table.shape[0], : table.shape[1]] = table
    rows, cols = linear_sum_assignment(-square)
    return [(int(r), int(c)) for r, c in zip(rows, cols)]


def hungarian_align(pred_clusters: Sequence[Hashable], true_labels: Sequence[Hashable]):
    """Map clusters to labels so that matched samples are maximal.

    Clusters left without a label (more clusters than labels) map to
    ``UNMATCHED`` and always count as errors.

    Returns ``(mapping, relabeled, agreement)``.
    """
    if len(pred_clusters) != len(true_labels):
        raise LengthMismatch("cluster and label sequences differ in length")
    clusters, labels, table = contingency(pred_clusters, true_labels)
    mapping = {}
    agreement = 0
    for r, c in assign_max(table):
        if r < len(clusters):
            if c < len(labels):
                mapping[clusters[r]] = labels[c]
                agreement += int(table[r, c])
            else:
                mapping[clusters[r]] = UNMATCHED
    relabeled = [mapping[p] for p in pred_clusters]
    return mapping, relabeled, agreement
