import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from helpers import (
    graph_matches_reference,
    injected_model,
    random_graph_instance,
    reference_graph,
    tokens_from_counts,
)
from stylograph.corpus import term_stats
from stylograph.errors import ModelStatsMismatch
from stylograph.graph import (
    GraphNode,
    GraphParams,
    W2VGraph,
    build_graph,
    export_graph,
    parse_graph_json,
)

COUNTS = {"a": 5, "b": 4, "c": 3, "d": 2, "e": 1}
STATS = term_stats(tokens_from_counts(COUNTS))


def mini_graph():
    model = injected_model("abcde", [[1, 0], [0.9, 0.1], [0, 1], [0.8, 0.2], [0.1, 0.9]])
    return build_graph(STATS, model, GraphParams(N=2, K=2), "mini")


class TestBuildGraph:
    def test_multi_example(self):
        g = mini_graph()
        assert [n.word for n in g.nodes_of("core")] == ["a", "b"]
        assert [n.word for n in g.nodes_of("multi")] == ["d"]
        assert g.nodes_of("boundary") == []
        assert [(e.a, e.b) for e in g.edges_of("core")] == [("a", "b")]
        multi = {(e.a, e.b): e.weight for e in g.edges_of("multi")}
        assert set(multi) == {("a", "d"), ("b", "d")}
        assert round(multi[("a", "d")], 4) == 0.9701
        assert round(multi[("b", "d")], 4) == 0.9910

    def test_boundary_example(self):
        model = injected_model("abcde", [[1, 0], [0.9, 0.1], [0.95, -0.1], [0.8, 0.2], [0.1, 0.9]])
        g = build_graph(STATS, model, GraphParams(N=2, K=2))
        assert len(g.edges_of("core")) == 1
        assert {n.word for n in g.nodes_of("boundary")} == {"c", "d"}
        assert len(g.edges_of("boundary")) == 2
        assert g.nodes_of("multi") == []
        ac = next(e for e in g.edges if e.endpoints == {"a", "c"})
        assert round(ac.weight, 4) == 0.9945

    def test_small_vocabulary(self):
        model = injected_model("xyz", [[1, 0], [0, 1], [1, 1]])
        g = build_graph(term_stats(["x", "x", "y", "z"]), model, GraphParams(N=20, K=10))
        assert [n.node_type for n in g.nodes] == ["core"] * 3
        assert all(e.edge_type == "core" for e in g.edges)
        assert len(g.edges) == 3

    def test_node_weights_and_indices(self):
        g = mini_graph()
        d = g.node_map()["d"]
        assert d.weight == pytest.approx(2 / 15) and d.index == 4

    def test_missing_core_word(self):
        model = injected_model("ab", [[1, 0], [0, 1]])
        with pytest.raises(ModelStatsMismatch):
            build_graph(STATS, model, GraphParams(N=3, K=1))

    def test_zero_core_vector_has_no_edges(self):
        model = injected_model("abcde", [[0, 0], [0.9, 0.1], [0, 1], [0.8, 0.2], [0.1, 0.9]])
        g = build_graph(STATS, model, GraphParams(N=2, K=2))
        assert g.degree("a") == 0

    def test_deterministic(self):
        assert export_graph(mini_graph(), "json") == export_graph(mini_graph(), "json")

    def test_matches_reference_on_random_instances(self):
        rng = np.random.default_rng(2024)
        for _ in range(200):
            tokens, words, vectors, N, K = random_graph_instance(rng)
            g = build_graph(term_stats(tokens), injected_model(words, vectors), GraphParams(N, K))
            types, edges = reference_graph(tokens, words, vectors, N, K)
            assert graph_matches_reference(g, types, edges)


@st.composite
def graphs(draw):
    seed = draw(st.integers(0, 2**32 - 1))
    tokens, words, vectors, N, K = random_graph_instance(np.random.default_rng(seed))
    return term_stats(tokens), build_graph(term_stats(tokens), injected_model(words, vectors),
                                           GraphParams(N, K))


class TestInvariants:
    @settings(max_examples=60, deadline=None)
    @given(graphs())
    def test_structure(self, pair):
        stats, g = pair
        core = g.nodes_of("core")
        assert len(core) == min(g.params.N, len(stats.freq))
        assert sorted(n.index for n in core) == list(range(1, len(core) + 1))
        words = [n.word for n in g.nodes]
        assert len(words) == len(set(words))
        core_words = {n.word for n in core}
        for n in g.nodes:
            if n.node_type == "core":
                continue
            linked = {e.a if e.b == n.word else e.b for e in g.edges if n.word in (e.a, e.b)}
            assert linked <= core_words
            assert (len(linked) >= 2) == (n.node_type == "multi")
            assert len(linked) >= 1
        assert len(g.edges) <= len(core) * g.params.K
        for e in g.edges:
            assert e.a in core_words and -1.0 <= e.weight <= 1.0


class TestExport:
    def test_single_core_node_dot(self):
        g = W2VGraph("one", GraphParams(1, 1), [GraphNode("x", "core", 1.0, 1)], [])
        dot = export_graph(g, "dot")
        node_lines = [l for l in dot.splitlines() if "[color=" in l]
        assert len(node_lines) == 1 and "color=red" in node_lines[0]

    def test_mini_graph_dot(self):
        dot = export_graph(mini_graph(), "dot")
        lines = dot.splitlines()
        assert lines[0].startswith("graph ") and lines[-1] == "}"
        nodes = [l for l in lines if "[color=" in l]
        edges = [l for l in lines if " -- " in l]
        assert len(nodes) == 3 and len(edges) == 3
        assert sum("color=red" in l for l in nodes) == 2
        assert sum("color=green" in l for l in nodes) == 1
        assert any('label="0.9939"' in l for l in edges)

    def test_json_round_trip(self):
        g = mini_graph()
        text = export_graph(g, "json")
        assert parse_graph_json(text) == g
        assert set(json.loads(text)) == {"doc_id", "params", "nodes", "edges"}

    def test_unknown_format(self):
        with pytest.raises(ValueError):
            export_graph(mini_graph(), "gml")
