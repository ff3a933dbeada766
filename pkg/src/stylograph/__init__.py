"""Word2vec-graph stylometry toolkit."""

from .corpus import Corpus, Document, TermStats, TokenSeq, knee_point, load_corpus, term_stats, tokenize
from .embedding import EmbeddingHyperparams, EmbeddingModel, cosine, top_k_similar, train_embedding
from .graph import GraphParams, W2VGraph, build_graph, export_graph

__version__ = "0.1.0"

__all__ = [
    "Corpus",
    "Document",
    "EmbeddingHyperparams",
    "EmbeddingModel",
    "GraphParams",
    "TermStats",
    "TokenSeq",
    "W2VGraph",
    "build_graph",
    "cosine",
    "export_graph",
    "knee_point",
    "load_corpus",
    "term_stats",
    "tokenize",
    "top_k_similar",
    "train_embedding",
]
