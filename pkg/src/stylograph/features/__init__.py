from .graph_features import (
    FeatureLayout,
    GraphWords,
    graph_feature_names,
    graph_feature_vector,
    graph_layout,
    graph_word_names,
    graph_word_vector,
)
from .matrix import FeatureMatrix
from .ranking import anova_f, anova_f_rank, chi_square_rank
from .text import (
    char_ngram_counts,
    char_ngram_features,
    chi_square_scores,
    information_gain,
    stylometry_features,
    stylometry_matrix,
    stylometry_names,
    tfidf_features,
    tfidf_matrix,
)

__all__ = [
    "FeatureLayout",
    "FeatureMatrix",
    "GraphWords",
    "anova_f",
    "anova_f_rank",
    "char_ngram_counts",
    "char_ngram_features",
    "chi_square_rank",
    "chi_square_scores",
    "graph_feature_names",
    "graph_feature_vector",
    "graph_layout",
    "graph_word_names",
    "graph_word_vector",
    "information_gain",
    "stylometry_features",
    "stylometry_matrix",
    "stylometry_names",
    "tfidf_features",
    "tfidf_matrix",
]
