from .cluster import (
    ClusterResult,
    KMeansConfig,
    jaccard,
    jaccard_matrix,
    jaccard_spectral_cluster,
    kmeans,
    spectral_cluster,
)
from .combine import combine_dual_clustering, one_hot_clusters
from .metrics import (
    UNMATCHED,
    confusion_matrix,
    contingency,
    hungarian_align,
    per_class_scores,
    weighted_f1,
)
from .split import SplitSpec, stratified_split
from .svm import SvmConfig, SvmModel, predict, train_linear_svm

__all__ = [
    "ClusterResult",
    "KMeansConfig",
    "SplitSpec",
    "SvmConfig",
    "SvmModel",
    "UNMATCHED",
    "combine_dual_clustering",
    "confusion_matrix",
    "contingency",
    "hungarian_align",
    "jaccard",
    "jaccard_matrix",
    "jaccard_spectral_cluster",
    "kmeans",
    "one_hot_clusters",
    "per_class_scores",
    "predict",
    "spectral_cluster",
    "stratified_split",
    "train_linear_svm",
    "weighted_f1",
]
