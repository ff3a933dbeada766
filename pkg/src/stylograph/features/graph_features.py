"""Fixed-layout structural features of a Word2vec graph, plus graph words."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

import numpy as np

from ..errors import VariantMismatch, WordNotInVocabulary
from ..graph import BOUNDARY, CORE, DEFAULT_N, MULTI, NODE_TYPES, W2VGraph

LAYOUT_VERSION = 1
DEFAULT_INDEX_THRESHOLD = 100
DEFAULT_CAPS = (40, 60)
_MULTI_DEGREE_BUCKETS = 6  # 0..4 exact, last bucket is ">= 5"


@dataclass(frozen=True)
class FeatureLayout:
    names: tuple[str, ...]
    variant: str
    version: int = LAYOUT_VERSION

    @property
    def length(self) -> int:
        return len(self.names)

    def to_dict(self) -> dict:
        return {"version": self.version, "variant": self.variant, "length": self.length,
                "names": list(self.names)}


def graph_feature_names(N: int) -> list[str]:
    names = [f"n_{t}_nodes" for t in NODE_TYPES] + [f"n_{t}_edges" for t in NODE_TYPES]
    for kind in ("node", "edge"):
        for t in NODE_TYPES:
            names += [f"{t}_{kind}_weight_{s}" for s in ("min", "max", "avg")]
    for t in NODE_TYPES:
        names += [f"core_degree_{t}_{s}" for s in ("min", "max", "avg")]
    names.append("core_degree_total")
    for r in range(1, N + 1):
        names += [f"core{r}_core_degree", f"core{r}_multi_degree"]
    for t in (MULTI, BOUNDARY):
        names += [f"{t}_index_{s}" for s in ("min", "max", "avg", "std")]
    names += [f"n_{t}_index_under_threshold" for t in (MULTI, BOUNDARY)]
    names += [f"n_core_multi_degree_{d}" for d in range(_MULTI_DEGREE_BUCKETS - 1)]
    names.append(f"n_core_multi_degree_{_MULTI_DEGREE_BUCKETS - 1}plus")
    names += [
        "n_core_degree_eq_min",
        "n_core_degree_eq_max",
        "n_core_degree_gt_avg",
        "n_core_degree_lt_avg",
    ]
    names.append("n_nodes_total")
    return names


def graph_layout(variant: str | int) -> FeatureLayout:
    """Layout for a named variant ("with"/"without") or an explicit N."""
    if isinstance(variant, int):
        return FeatureLayout(tuple(graph_feature_names(variant)), variant=f"N{variant}")
    return FeatureLayout(tuple(graph_feature_names(DEFAULT_N[variant])), variant=variant)


def _min_max_avg(values: Sequence[float]) -> list[float]:
    if not values:
        return [0.0, 0.0, 0.0]
    arr = np.asarray(values, dtype=np.float64)
    return [float(arr.min()), float(arr.max()), float(arr.mean())]


def _min_max_avg_std(values: Sequence[float]) -> list[float]:
    if not values:
        return [0.0, 0.0, 0.0, 0.0]
    arr = np.asarray(values, dtype=np.float64)
    return [float(arr.min()), float(arr.max()), float(arr.mean()), float(arr.std())]


def graph_feature_vector(
    graph: W2VGraph,
    variant: Optional[str] = None,
    index_threshold: int = DEFAULT_INDEX_THRESHOLD,
) -> np.ndarray:
    """Structural feature vector; length 55 + 2N (95 for N=20, 85 for N=15)."""
    N = graph.params.N
    if variant is not None and DEFAULT_N[variant] != N:
        raise VariantMismatch(
            f"graph built with N={N}, layout {variant!r} expects N={DEFAULT_N[variant]}"
        )
    by_type = {t: graph.nodes_of(t) for t in NODE_TYPES}
    edges_by_type = {t: graph.edges_of(t) for t in NODE_TYPES}
    core = by_type[CORE]

    degree = {t: {n.word: 0 for n in core} for t in NODE_TYPES}
    for t, edges in edges_by_type.items():
        for e in edges:
            for w in (e.a, e.b):
                if w in degree[t]:
                    degree[t][w] += 1
    total_degree = [sum(degree[t][n.word] for t in NODE_TYPES) for n in core]

    out: list[float] = []
    out += [len(by_type[t]) for t in NODE_TYPES]
    out += [len(edges_by_type[t]) for t in NODE_TYPES]
    for t in NODE_TYPES:
        out += _min_max_avg([n.weight for n in by_type[t]])
    for t in NODE_TYPES:
        out += _min_max_avg([e.weight for e in edges_by_type[t]])
    for t in NODE_TYPES:
        out += _min_max_avg([degree[t][n.word] for n in core])
    out.append(sum(total_degree))

    for r in range(N):
        if r < len(core):
            w = core[r].word
            out += [degree[CORE][w], degree[MULTI][w]]
        else:
            out += [0, 0]

    for t in (MULTI, BOUNDARY):
        out += _min_max_avg_std([n.index for n in by_type[t]])
    for t in (MULTI, BOUNDARY):
        out.append(sum(1 for n in by_type[t] if n.index < index_threshold))

    buckets = [0] * _MULTI_DEGREE_BUCKETS
    for n in core:
        buckets[min(degree[MULTI][n.word], _MULTI_DEGREE_BUCKETS - 1)] += 1
    out += buckets

    if total_degree:
        lo, hi = min(total_degree), max(total_degree)
        avg = sum(total_degree) / len(total_degree)
        out += [
            sum(d == lo for d in total_degree),
            sum(d == hi for d in total_degree),
            sum(d > avg for d in total_degree),
            sum(d < avg for d in total_degree),
        ]
    else:
        out += [0, 0, 0, 0]
    out.append(len(graph.nodes))
    return np.asarray(out, dtype=np.float64)


@dataclass(frozen=True)
class GraphWords:
    core_words: tuple[str, ...]
    multi_words: tuple[str, ...]
    boundary_words: tuple[str, ...]
    indices: tuple[int, ...]

    @property
    def width(self) -> int:
        return len(self.indices)

    def word_set(self) -> frozenset[str]:
        return frozenset(self.core_words + self.multi_words + self.boundary_words)


def graph_word_vector(
    graph: W2VGraph,
    vocab: Mapping[str, int],
    caps: tuple[int, int] = DEFAULT_CAPS,
) -> GraphWords:
    """Graph words mapped to corpus vocabulary indices, 0 marking padding.

    Layout: N core slots by rank, then ``caps[0]`` multi and ``caps[1]``
    boundary slots ordered by descending node weight (rank breaks ties).
    """
    max_multi, max_boundary = caps
    N = graph.params.N

    def ordered(node_type: str, cap: int) -> tuple[str, ...]:
        nodes = sorted(graph.nodes_of(node_type), key=lambda n: (-n.weight, n.index))
        return tuple(n.word for n in nodes[:cap])

    core = tuple(n.word for n in sorted(graph.nodes_of(CORE), key=lambda n: n.index))[:N]
    multi = ordered(MULTI, max_multi)
    boundary = ordered(BOUNDARY, max_boundary)

    def lookup(words: Sequence[str], width: int) -> list[int]:
        ids = []
        for w in words:
            if w not in vocab:
                raise WordNotInVocabulary(w)
            ids.append(int(vocab[w]))
        return ids + [0] * (width - len(ids))

    indices = lookup(core, N) + lookup(multi, max_multi) + lookup(boundary, max_boundary)
    return GraphWords(core, multi, boundary, tuple(indices))


def graph_word_names(N: int, caps: tuple[int, int] = DEFAULT_CAPS) -> list[str]:
    return (
        [f"gw_core{i + 1}" for i in range(N)]
        + [f"gw_multi{i + 1}" for i in range(caps[0])]
        + [f"gw_boundary{i + 1}" for i in range(caps[1])]
    )
