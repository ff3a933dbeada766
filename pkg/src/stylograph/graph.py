"""Word2vec graph construction and export.

Core nodes are a document's most frequent words. Each core word is linked
to its K nearest neighbours in embedding space; non-core neighbours become
multi nodes when two or more core words reach them and boundary nodes
otherwise.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Literal

from .corpus import TermStats
from .embedding import EmbeddingModel, top_k_similar
from .errors import ModelStatsMismatch

CORE, MULTI, BOUNDARY = "core", "multi", "boundary"
NODE_TYPES = (CORE, MULTI, BOUNDARY)
DOT_COLORS = {CORE: "red", MULTI: "green", BOUNDARY: "black"}

DEFAULT_N = {"with": 20, "without": 15}


@dataclass(frozen=True)
class GraphParams:
    N: int = 20
    K: int = 10

    def __post_init__(self):
        if self.N < 1 or self.K < 1:
            raise ValueError("N and K must be positive")

    @classmethod
    def for_variant(cls, variant: str, K: int = 10) -> "GraphParams":
        return cls(N=DEFAULT_N[variant], K=K)


@dataclass(frozen=True)
class GraphNode:
    word: str
    node_type: str
    weight: float
    index: int


@dataclass(frozen=True)
class GraphEdge:
    a: str
    b: str
    edge_type: str
    weight: float

    @property
    def endpoints(self) -> frozenset[str]:
        return frozenset((self.a, self.b))


@dataclass
class W2VGraph:
    """Undirected typed graph; nodes sorted by index, edges by endpoint indices."""

    doc_id: str
    params: GraphParams
    nodes: list[GraphNode] = field(default_factory=list)
    edges: list[GraphEdge] = field(default_factory=list)

    def nodes_of(self, node_type: str) -> list[GraphNode]:
        return [n for n in self.nodes if n.node_type == node_type]

    def edges_of(self, edge_type: str) -> list[GraphEdge]:
        return [e for e in self.edges if e.edge_type == edge_type]

    def node_map(self) -> dict[str, GraphNode]:
        return {n.word: n for n in self.nodes}

    def degree(self, word: str, edge_type: str | None = None) -> int:
        return sum(
            1
            for e in self.edges
            if (edge_type is None or e.edge_type == edge_type) and word in (e.a, e.b)
        )

    def to_dict(self) -> dict:
        return {
            "doc_id": self.doc_id,
            "params": {"N": self.params.N, "K": self.params.K},
            "nodes": [
                {"word": n.word, "type": n.node_type, "weight": n.weight, "index": n.index}
                for n in self.nodes
            ],
            "edges": [
                {"a": e.a, "b": e.b, "type": e.edge_type, "weight": e.weight}
                for e in self.edges
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "W2VGraph":
        return cls(
            doc_id=data["doc_id"],
            params=GraphParams(**data["params"]),
            nodes=[
                GraphNode(n["word"], n["type"], float(n["weight"]), int(n["index"]))
                for n in data["nodes"]
            ],
            edges=[
                GraphEdge(e["a"], e["b"], e["type"], float(e["weight"]))
                for e in data["edges"]
            ],
        )


def build_graph(
    stats: TermStats,
    model: EmbeddingModel,
    params: GraphParams = GraphParams(),
    doc_id: str = "",
) -> W2VGraph:
    """Build the typed Word2vec graph of one document."""
    ranked = stats.words_by_rank()
    core_words = ranked[: min(params.N, len(ranked))]
    missing = [w for w in core_words if w not in model]
    if missing:
        raise ModelStatsMismatch(f"core words missing from embedding: {missing[:5]}")
    core_set = set(core_words)

    # undirected edge -> cosine; a mutual selection is recorded once
    edge_weight: dict[frozenset[str], float] = {}
    core_links: dict[str, set[str]] = {}
    for cw in core_words:
        for other, sim in top_k_similar(model, cw, params.K):
            key = frozenset((cw, other))
            edge_weight.setdefault(key, sim)
            if other not in core_set:
                core_links.setdefault(other, set()).add(cw)

    node_type = {w: CORE for w in core_words}
    for w, linked in core_links.items():
        node_type[w] = MULTI if len(linked) >= 2 else BOUNDARY

    def index_of(w: str) -> int:
        return stats.rank[w]

    nodes = [
        GraphNode(w, node_type[w], stats.rel_freq[w], index_of(w))
        for w in sorted(node_type, key=index_of)
    ]
    edges = []
    for key, weight in edge_weight.items():
        a, b = sorted(key, key=index_of)
        etype = CORE if b in core_set else node_type[b]
        edges.append(GraphEdge(a, b, etype, weight))
    edges.sort(key=lambda e: (index_of(e.a), index_of(e.b)))
    return W2VGraph(doc_id=doc_id, params=params, nodes=nodes, edges=edges)


def _dot_quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(graph: W2VGraph) -> str:
    lines = [f"graph {_dot_quote(graph.doc_id or 'w2vgraph')} {{"]
    for n in graph.nodes:
        lines.append(
            f"  {_dot_quote(n.word)} [color={DOT_COLORS[n.node_type]}, "
            f'type={n.node_type}, weight="{n.weight:.6g}", index={n.index}];'
        )
    for e in graph.edges:
        lines.append(
            f"  {_dot_quote(e.a)} -- {_dot_quote(e.b)} "
            f'[label="{e.weight:.4f}", type={e.edge_type}];'
        )
    lines.append("}")
    return "\n".join(lines) + "\n"


def export_graph(graph: W2VGraph, format: Literal["dot", "json"] = "json") -> str:
    if format == "dot":
        return to_dot(graph)
    if format == "json":
        return json.dumps(graph.to_dict(), ensure_ascii=False, indent=1)
    raise ValueError(f"unknown export format {format!r}")


def parse_graph_json(text: str) -> W2VGraph:
    return W2VGraph.from_dict(json.loads(text))
