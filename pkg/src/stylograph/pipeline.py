"""End-to-end experiment: ingest, embed, graph, features, learn, report."""

from __future__ import annotations

import hashlib
import json
import logging
import os
import re
import shutil
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from .corpus import Corpus, TermStats, average_knee_point, load_corpus, load_stopwords, term_stats
from .embedding import (
    EmbeddingCache,
    EmbeddingHyperparams,
    EmbeddingModel,
    tokens_digest,
    train_embedding,
)
from .errors import ConfigInvalid, StylographError
from .features import (
    FeatureMatrix,
    anova_f_rank,
    char_ngram_features,
    graph_feature_names,
    graph_feature_vector,
    graph_word_names,
    graph_word_vector,
    stylometry_matrix,
    tfidf_features,
)
from .graph import DEFAULT_N, GraphParams, W2VGraph, build_graph, export_graph
from .learning import (
    KMeansConfig,
    SplitSpec,
    SvmConfig,
    combine_dual_clustering,
    confusion_matrix,
    hungarian_align,
    jaccard_spectral_cluster,
    kmeans,
    per_class_scores,
    predict,
    stratified_split,
    train_linear_svm,
    weighted_f1,
)

log = logging.getLogger(__name__)

FeatureSet = Literal["w2v", "w2v_plus", "tfidf", "tfidf_top100", "char_ngram", "stylometry"]
GRAPH_SETS = ("w2v", "w2v_plus")
LABELLED_SETS = ("tfidf_top100", "char_ngram")
SEED_ENV = "STYLOGRAPH_SEED"


class GraphSection(BaseModel):
    model_config = ConfigDict(extra="forbid")
    N: Optional[int] = Field(default=None, ge=1)
    K: int = Field(default=10, ge=1)
    index_threshold: int = Field(default=100, ge=1)
    word_caps: tuple[int, int] = (40, 60)


class EmbeddingSection(BaseModel):
    model_config = ConfigDict(extra="forbid")
    dimension: int = Field(default=100, ge=2)
    window: int = Field(default=5, ge=1)
    negatives: int = Field(default=5, ge=1)
    epochs: Optional[int] = Field(default=None, ge=1)
    initial_learning_rate: float = Field(default=0.025, gt=0)
    min_learning_rate: float = Field(default=1e-4, gt=0)
    min_count: int = Field(default=1, ge=1)


class SplitSection(BaseModel):
    model_config = ConfigDict(extra="forbid")
    train_ratio: float = Field(default=0.7, gt=0, lt=1)
    stratified: bool = True


class LearnerSection(BaseModel):
    model_config = ConfigDict(extra="forbid")
    C: float = Field(default=1.0, gt=0)
    svm_epochs: int = Field(default=100, ge=1)
    restarts: int = Field(default=10, ge=1)
    max_iter: int = Field(default=300, ge=1)
    tol: float = Field(default=1e-6, gt=0)
    n_clusters: Optional[int] = Field(default=None, ge=1)


class ExperimentConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    corpus: str
    stopwords: Optional[str] = None
    variant: Literal["with", "without"] = "with"
    label: Optional[Literal["author", "genre"]] = "author"
    feature_set: FeatureSet = "w2v"
    task: Literal["classify", "cluster"] = "classify"
    lowercase: bool = True
    graph: GraphSection = GraphSection()
    embedding: EmbeddingSection = EmbeddingSection()
    learner: LearnerSection = LearnerSection()
    split: SplitSection = SplitSection()
    tfidf_top: int = Field(default=100, ge=1)
    ngram_max_n: int = Field(default=4, ge=1)
    ngram_top: int = Field(default=30_000, ge=1)
    seed: int = 0
    out: str = "runs"
    workers: int = Field(default=1, ge=1)

    @model_validator(mode="after")
    def _check(self):
        if self.variant == "without" and not self.stopwords:
            raise ValueError("variant 'without' needs a stopword file")
        if self.label is None:
            if self.task == "classify":
                raise ValueError("classification needs a label field")
            if self.feature_set in LABELLED_SETS:
                raise ValueError(f"{self.feature_set} selects features with labels")
            if self.feature_set == "w2v_plus":
                raise ValueError("w2v_plus clustering trains a classifier on both clusterings")
            if self.learner.n_clusters is None:
                raise ValueError("unlabelled clustering needs learner.n_clusters")
        return self

    @property
    def N(self) -> int:
        return self.graph.N if self.graph.N is not None else DEFAULT_N[self.variant]

    def graph_params(self) -> GraphParams:
        return GraphParams(N=self.N, K=self.graph.K)

    def identity(self) -> dict:
        """Fields that determine outputs; location and parallelism excluded."""
        data = self.model_dump(mode="json", exclude={"out", "workers"})
        data["graph"]["N"] = self.N
        return data


def load_config(path: Optional[str] = None, **overrides) -> ExperimentConfig:
    """Read a JSON config and apply overrides; ``None`` overrides are ignored.

    Nested fields are addressed with dotted keys, e.g. ``graph.K``. The seed
    falls back to ``$STYLOGRAPH_SEED`` when neither source sets it.
    """
    data: dict = {}
    if path:
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigInvalid(f"cannot read config {path}: {exc}") from exc
    for key, value in overrides.items():
        if value is None:
            continue
        target = data
        parts = key.split(".")
        for part in parts[:-1]:
            target = target.setdefault(part, {})
        target[parts[-1]] = value
    if "seed" not in data and os.environ.get(SEED_ENV):
        try:
            data["seed"] = int(os.environ[SEED_ENV])
        except ValueError as exc:
            raise ConfigInvalid(f"{SEED_ENV} is not an integer") from exc
    if path and "corpus" in data and not Path(data["corpus"]).is_absolute() and "corpus" not in {
        k for k, v in overrides.items() if v is not None
    }:
        data["corpus"] = str(Path(path).parent / data["corpus"])
        if data.get("stopwords") and not Path(data["stopwords"]).is_absolute():
            data["stopwords"] = str(Path(path).parent / data["stopwords"])
    try:
        return ExperimentConfig(**data)
    except ValidationError as exc:
        raise ConfigInvalid(str(exc)) from exc


def config_hash(config: ExperimentConfig) -> str:
    h = hashlib.sha256(json.dumps(config.identity(), sort_keys=True).encode())
    manifest = Path(config.corpus)
    if manifest.exists():
        h.update(manifest.read_bytes())
    if config.stopwords and Path(config.stopwords).exists():
        h.update(Path(config.stopwords).read_bytes())
    return h.hexdigest()[:12]


def safe_name(doc_id: str) -> str:
    cleaned = re.sub(r"[^\w.-]", "_", doc_id)
    if cleaned != doc_id:
        cleaned += "-" + hashlib.sha256(doc_id.encode()).hexdigest()[:8]
    return cleaned


def doc_seed(global_seed: int, doc_id: str) -> int:
    digest = hashlib.sha256(f"{global_seed}:{doc_id}".encode()).digest()
    return int.from_bytes(digest[:8], "little") >> 1


# ---------------------------------------------------------------------------
# stages


def ingest(config: ExperimentConfig) -> Corpus:
    stop = load_stopwords(config.stopwords) if config.variant == "without" else None
    return load_corpus(config.corpus, stopwords=stop, lowercase=config.lowercase)


@dataclass
class DocGraph:
    doc_id: str
    stats: TermStats
    model: EmbeddingModel
    graph: W2VGraph


def _hyperparams(config: ExperimentConfig, doc_id: str) -> EmbeddingHyperparams:
    return EmbeddingHyperparams(**config.embedding.model_dump(), seed=doc_seed(config.seed, doc_id))


def embed_and_graph(
    corpus: Corpus,
    config: ExperimentConfig,
    cache_dir: Optional[Path] = None,
) -> list[DocGraph]:
    """Per-document embedding and graph build, fanned out over ``config.workers``.

    Results come back in corpus order whatever the worker count.
    """
    cache = EmbeddingCache(cache_dir) if cache_dir is not None else None
    params = config.graph_params()

    def one(i: int) -> DocGraph:
        doc = corpus.documents[i]
        seq = corpus.tokens[i]
        try:
            hp = _hyperparams(config, doc.doc_id)
            digest = tokens_digest(seq)
            key = f"{safe_name(doc.doc_id)}-{config.variant}"
            model = cache.load(key, hp, digest) if cache else None
            if model is None:
                model = train_embedding(seq, hp)
                if cache:
                    cache.store(key, model, digest)
            stats = term_stats(seq)
            graph = build_graph(stats, model, params, doc_id=doc.doc_id)
        except StylographError as exc:
            raise type(exc)(f"{doc.doc_id}: {exc}") from exc
        return DocGraph(doc.doc_id, stats, model, graph)

    indices = range(corpus.doc_count)
    if config.workers > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            return list(pool.map(one, indices))
    return [one(i) for i in indices]


def graph_matrix(graphs: list[DocGraph], config: ExperimentConfig) -> FeatureMatrix:
    rows = [
        graph_feature_vector(g.graph, index_threshold=config.graph.index_threshold)
        for g in graphs
    ]
    return FeatureMatrix(
        np.vstack(rows), [g.doc_id for g in graphs], graph_feature_names(config.N),
        variant=config.variant, feature_set="w2v",
    )


def graph_word_matrix(graphs: list[DocGraph], corpus: Corpus, config: ExperimentConfig):
    caps = tuple(config.graph.word_caps)
    words = [graph_word_vector(g.graph, corpus.vocabulary, caps) for g in graphs]
    mat = FeatureMatrix(
        np.array([w.indices for w in words], dtype=np.float64).reshape(len(words), -1),
        [g.doc_id for g in graphs], graph_word_names(config.N, caps),
        variant=config.variant, feature_set="graph_words",
    )
    return mat, words


def build_features(
    config: ExperimentConfig,
    corpus: Corpus,
    graphs: Optional[list[DocGraph]] = None,
    labels: Optional[list[str]] = None,
    fit_rows: Optional[list[int]] = None,
) -> FeatureMatrix:
    fs = config.feature_set
    if fs in GRAPH_SETS:
        if graphs is None:
            raise ValueError("graph feature sets need built graphs")
        mat = graph_matrix(graphs, config)
        if fs == "w2v_plus":
            mat = mat.hstack(graph_word_matrix(graphs, corpus, config)[0])
    elif fs == "tfidf":
        mat = tfidf_features(corpus)
    elif fs == "tfidf_top100":
        mat = tfidf_features(corpus, labels, top=config.tfidf_top, fit_rows=fit_rows)
    elif fs == "char_ngram":
        mat = char_ngram_features(corpus, labels, config.ngram_max_n, config.ngram_top, fit_rows)
    elif fs == "stylometry":
        stop = load_stopwords(config.stopwords) if config.stopwords else None
        mat = stylometry_matrix(corpus, stop)
    else:  # pragma: no cover - guarded by the config schema
        raise ConfigInvalid(f"unknown feature set {fs}")
    mat.variant = config.variant
    mat.feature_set = fs
    return mat


def standardize(X: np.ndarray) -> np.ndarray:
    std = X.std(axis=0)
    return np.where(std > 0, (X - X.mean(axis=0)) / np.where(std > 0, std, 1.0), 0.0)


def _split(config: ExperimentConfig, corpus: Corpus, labels: list[str]):
    spec = SplitSpec(config.split.train_ratio, config.seed, config.split.stratified)
    train_ids, test_ids = stratified_split(corpus.doc_ids, labels, spec)
    pos = {d: i for i, d in enumerate(corpus.doc_ids)}
    return spec, [pos[d] for d in train_ids], [pos[d] for d in test_ids]


def _scores(truth, pred) -> dict:
    return {
        "per_class": {str(k): v for k, v in per_class_scores(truth, pred).items()},
        "weighted_f1": weighted_f1(truth, pred),
        "confusion_matrix": confusion_matrix(truth, pred),
    }


def _ranking(mat: FeatureMatrix, labels: list[str], rows: list[int], top: int = 25):
    if len(set(labels[r] for r in rows)) < 2:
        return None
    sub = mat.values[rows]
    ranked = anova_f_rank(sub, [labels[r] for r in rows], mat.names)[:top]
    return [{"feature": n, "f": (None if np.isinf(f) else f), "infinite": bool(np.isinf(f))}
            for n, f in ranked]


def classify(config, corpus, graphs, labels) -> tuple[dict, FeatureMatrix]:
    spec, train, test = _split(config, corpus, labels)
    mat = build_features(config, corpus, graphs, labels, fit_rows=train)
    svm_cfg = SvmConfig(config.learner.C, config.learner.svm_epochs, config.seed)
    model = train_linear_svm(mat.values[train], [labels[i] for i in train], svm_cfg)
    pred = predict(model, mat.values[test])
    truth = [labels[i] for i in test]
    report = {
        "learner": {"name": "linear_svm", "C": svm_cfg.C, "epochs": svm_cfg.epochs},
        "split": {"ratio": spec.train_ratio, "seed": spec.seed, "stratified": spec.stratified,
                  "train": len(train), "test": len(test)},
        **_scores(truth, pred),
        "predictions": {corpus.doc_ids[i]: p for i, p in zip(test, pred)},
        "feature_ranking": _ranking(mat, labels, train),
    }
    return report, mat


def cluster(config, corpus, graphs, labels) -> tuple[dict, FeatureMatrix]:
    k = config.learner.n_clusters or len(set(labels))
    km_cfg = KMeansConfig(config.learner.restarts, config.learner.max_iter,
                          config.learner.tol, config.seed)
    learner = {"name": "kmeans", "k": k, "restarts": km_cfg.restarts,
               "max_iter": km_cfg.max_iter, "tol": km_cfg.tol}
    if config.feature_set == "w2v_plus":
        numeric = graph_matrix(graphs, config)
        gw_mat, words = graph_word_matrix(graphs, corpus, config)
        km = kmeans(standardize(numeric.values), k, km_cfg)
        sp = jaccard_spectral_cluster(words, k, config.seed)
        spec = SplitSpec(config.split.train_ratio, config.seed, config.split.stratified)
        svm_cfg = SvmConfig(config.learner.C, config.learner.svm_epochs, config.seed)
        test_ids, truth, pred = combine_dual_clustering(km, sp, labels, spec, svm_cfg,
                                                        ids=corpus.doc_ids)
        km_map, km_rel, _ = hungarian_align(km.as_labels(), labels)
        sp_map, sp_rel, _ = hungarian_align(sp.as_labels(), labels)
        learner = {"name": "kmeans+jaccard_spectral+svm", "k": k, "C": svm_cfg.C}
        report = {
            "learner": learner,
            "split": {"ratio": spec.train_ratio, "seed": spec.seed,
                      "stratified": spec.stratified, "test": len(test_ids)},
            **_scores(truth, pred),
            "predictions": dict(zip(test_ids, pred)),
            "cluster_mapping": {"kmeans": {str(c): l for c, l in km_map.items()},
                                "spectral": {str(c): l for c, l in sp_map.items()}},
            "component_f1": {"kmeans": weighted_f1(labels, km_rel),
                             "spectral": weighted_f1(labels, sp_rel)},
            "assignments": {d: [int(a), int(b)] for d, a, b in
                            zip(corpus.doc_ids, km.assignments, sp.assignments)},
        }
        return report, numeric.hstack(gw_mat)

    mat = build_features(config, corpus, graphs, labels if labels else None)
    km = kmeans(standardize(mat.values), k, km_cfg)
    report = {
        "learner": learner,
        "inertia": km.inertia,
        "assignments": {d: int(a) for d, a in zip(corpus.doc_ids, km.assignments)},
    }
    if labels:
        mapping, relabeled, _ = hungarian_align(km.as_labels(), labels)
        report.update(_scores(labels, relabeled))
        report["cluster_mapping"] = {str(c): l for c, l in mapping.items()}
        report["feature_ranking"] = _ranking(mat, labels, list(range(len(labels))))
    else:
        report["weighted_f1"] = None
    return report, mat


@dataclass
class RunResult:
    report: dict
    run_dir: Path
    features: FeatureMatrix


def run_dir_for(config: ExperimentConfig) -> Path:
    return Path(config.out) / config_hash(config)


def _write_graphs(directory: Path, graphs: list[DocGraph]) -> None:
    directory.mkdir(parents=True, exist_ok=True)
    for g in graphs:
        name = safe_name(g.doc_id)
        (directory / f"{name}.json").write_text(export_graph(g.graph, "json"), encoding="utf-8")
        (directory / f"{name}.dot").write_text(export_graph(g.graph, "dot"), encoding="utf-8")


class _AtomicDir:
    """Build a directory under a temporary name and swap it in on success."""

    def __init__(self, final: Path):
        self.final = final
        self.tmp = final.with_name(f".{final.name}.tmp-{os.getpid()}")

    def __enter__(self) -> Path:
        if self.tmp.exists():
            shutil.rmtree(self.tmp)
        self.tmp.mkdir(parents=True)
        return self.tmp

    def __exit__(self, exc_type, exc, tb):
        if exc_type is not None:
            shutil.rmtree(self.tmp, ignore_errors=True)
            return False
        if self.final.exists():
            shutil.rmtree(self.final)
        self.tmp.rename(self.final)
        return False


def run_experiment(config: ExperimentConfig) -> RunResult:
    """Run the configured experiment and write its artifacts.

    Outputs land in ``<out>/<config hash>/``: ``report.json``,
    ``features.csv``, ``layout.json`` and, for graph feature sets,
    ``graphs/<doc>.json|.dot``. Nothing is left behind on failure.
    """
    chash = config_hash(config)
    corpus = ingest(config)
    labels = corpus.labels(config.label) if config.label else []
    if labels and any(lab == "" for lab in labels):
        missing = [d for d, lab in zip(corpus.doc_ids, labels) if lab == ""]
        raise ConfigInvalid(f"documents without a {config.label} label: {missing[:5]}")
    graphs = None
    if config.feature_set in GRAPH_SETS:
        graphs = embed_and_graph(corpus, config, Path(config.out) / "_cache" / "embeddings")

    if config.task == "classify":
        body, mat = classify(config, corpus, graphs, labels)
    else:
        body, mat = cluster(config, corpus, graphs, labels)

    report = {
        "config_hash": chash,
        "config": config.identity(),
        "feature_set": config.feature_set,
        "variant": config.variant,
        "task": config.task,
        "label": config.label,
        "n_documents": corpus.doc_count,
        "n_features": mat.shape[1],
        "average_knee_point": average_knee_point(corpus),
        **body,
    }
    final = Path(config.out) / chash
    final.parent.mkdir(parents=True, exist_ok=True)
    with _AtomicDir(final) as tmp:
        mat.write(tmp / "features.csv", tmp / "layout.json")
        if graphs is not None:
            _write_graphs(tmp / "graphs", graphs)
        (tmp / "report.json").write_text(
            json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False) + "\n",
            encoding="utf-8",
        )
    log.info("wrote %s", final)
    return RunResult(report, final, mat)
