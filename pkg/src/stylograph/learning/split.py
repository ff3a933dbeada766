from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..errors import ClassTooSmall


@dataclass(frozen=True)
class SplitSpec:
    train_ratio: float = 0.7
    seed: int = 0
    stratified: bool = True

    def __post_init__(self):
        if not 0 < self.train_ratio < 1:
            raise ValueError("train_ratio must lie strictly between 0 and 1")


def _allocate(sizes: list[int], ratio: float) -> list[int]:
    """Largest-remainder split of round(ratio * n) training slots across classes.

    Every class keeps at least one training and one test sample.
    """
    total = sum(sizes)
    target = int(math.floor(ratio * total + 0.5))
    exact = [ratio * s for s in sizes]
    alloc = [min(max(int(math.floor(e)), 1), s - 1) for e, s in zip(exact, sizes)]
    remainders = sorted(range(len(sizes)), key=lambda i: (-(exact[i] - math.floor(exact[i])), i))
    i = 0
    while sum(alloc) < target and i < 2 * len(sizes):
        c = remainders[i % len(sizes)]
        if alloc[c] < sizes[c] - 1:
            alloc[c] += 1
        i += 1
    return alloc


def stratified_split(
    ids: Sequence[str],
    labels: Sequence[str],
    spec: SplitSpec = SplitSpec(),
) -> tuple[list[str], list[str]]:
    """Seeded train/test split; both halves keep the input order."""
    ids = list(ids)
    labels = list(labels)
    if len(ids) != len(labels):
        raise ValueError("ids and labels differ in length")
    rng = np.random.default_rng(spec.seed)
    n = len(ids)
    train_pos: list[int] = []
    if spec.stratified:
        classes = sorted(set(labels))
        members = {c: [i for i, lab in enumerate(labels) if lab == c] for c in classes}
        small = [c for c in classes if len(members[c]) < 2]
        if small:
            raise ClassTooSmall(f"classes with fewer than 2 samples: {small}")
        alloc = _allocate([len(members[c]) for c in classes], spec.train_ratio)
        for c, k in zip(classes, alloc):
            perm = rng.permutation(len(members[c]))
            train_pos += [members[c][p] for p in perm[:k]]
    else:
        k = min(max(int(math.floor(spec.train_ratio * n + 0.5)), 1), n - 1)
        train_pos = rng.permutation(n)[:k].tolist()
    chosen = set(train_pos)
    train = [ids[i] for i in range(n) if i in chosen]
    test = [ids[i] for i in range(n) if i not in chosen]
    return train, test
