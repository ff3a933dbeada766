"""Command-line entry point: ``stylograph <subcommand> [options]``."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

from .errors import ConfigInvalid, StylographError
from .features import chi_square_rank
from .features.ranking import anova_f_rank
from .graph import export_graph, parse_graph_json
from .pipeline import (
    ExperimentConfig,
    _split,
    average_knee_point,
    build_features,
    config_hash,
    embed_and_graph,
    ingest,
    load_config,
    run_dir_for,
    run_experiment,
    safe_name,
)

log = logging.getLogger("stylograph")


def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="experiment config (JSON)")
    parser.add_argument("--corpus", help="corpus manifest (JSON Lines)")
    parser.add_argument("--stopwords", help="stopword file, one word per line")
    parser.add_argument("--variant", choices=["with", "without"])
    parser.add_argument("--label", choices=["author", "genre", "none"])
    parser.add_argument("--features", dest="feature_set",
                        choices=["w2v", "w2v_plus", "tfidf", "tfidf_top100",
                                 "char_ngram", "stylometry"])
    parser.add_argument("--task", choices=["classify", "cluster"])
    parser.add_argument("--n", type=int, help="core words per graph")
    parser.add_argument("--k", type=int, help="neighbours per core word")
    parser.add_argument("--dim", type=int, help="embedding dimension")
    parser.add_argument("--clusters", type=int, help="number of clusters (default: classes)")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--split-ratio", type=float)
    parser.add_argument("--out", help="output root directory")
    parser.add_argument("--workers", type=int)
    parser.add_argument("-v", "--verbose", action="store_true")


def _config(args, **forced) -> ExperimentConfig:
    overrides = {
        "corpus": args.corpus,
        "stopwords": args.stopwords,
        "variant": args.variant,
        "feature_set": args.feature_set,
        "task": args.task,
        "graph.N": args.n,
        "graph.K": args.k,
        "embedding.dimension": args.dim,
        "learner.n_clusters": args.clusters,
        "seed": args.seed,
        "split.train_ratio": args.split_ratio,
        "out": args.out,
        "workers": args.workers,
    }
    overrides.update(forced)
    config = load_config(args.config, **overrides)
    if args.label is not None:
        data = config.model_dump()
        data["label"] = None if args.label == "none" else args.label
        try:
            config = ExperimentConfig(**data)
        except Exception as exc:
            raise ConfigInvalid(str(exc)) from exc
    return config


def _write_atomic(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(f".{path.name}.tmp-{os.getpid()}")
    try:
        tmp.write_text(text, encoding="utf-8")
        os.replace(tmp, path)
    finally:
        if tmp.exists():
            tmp.unlink()


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def cmd_ingest(args) -> int:
    config = _config(args)
    corpus = ingest(config)
    summary = {
        "documents": corpus.doc_count,
        "vocabulary": len(corpus.vocabulary),
        "tokens": sum(len(t) for t in corpus.tokens),
        "average_knee_point": average_knee_point(corpus),
        "variant": config.variant,
    }
    _write_atomic(run_dir_for(config) / "corpus.json", _dump(summary))
    print(_dump(summary), end="")
    return 0


def _graphs(config):
    corpus = ingest(config)
    cache = Path(config.out) / "_cache" / "embeddings"
    return corpus, embed_and_graph(corpus, config, cache)


def cmd_embed(args) -> int:
    config = _config(args)
    corpus, graphs = _graphs(config)
    print(f"embedded {len(graphs)} documents into {Path(config.out) / '_cache' / 'embeddings'}")
    return 0


def cmd_graph(args) -> int:
    config = _config(args)
    _, graphs = _graphs(config)
    directory = run_dir_for(config) / "graphs"
    for g in graphs:
        name = safe_name(g.doc_id)
        _write_atomic(directory / f"{name}.json", export_graph(g.graph, "json"))
        _write_atomic(directory / f"{name}.dot", export_graph(g.graph, "dot"))
    print(f"wrote {len(graphs)} graphs to {directory}")
    return 0


def _features(config):
    corpus = ingest(config)
    graphs = None
    if config.feature_set in ("w2v", "w2v_plus"):
        graphs = embed_and_graph(corpus, config, Path(config.out) / "_cache" / "embeddings")
    labels = corpus.labels(config.label) if config.label else None
    fit_rows = None
    if labels and config.task == "classify":
        _, fit_rows, _ = _split(config, corpus, labels)
    return corpus, labels, build_features(config, corpus, graphs, labels, fit_rows)


def cmd_features(args) -> int:
    config = _config(args)
    _, _, mat = _features(config)
    run_dir = run_dir_for(config)
    _write_atomic(run_dir / "features.csv", mat.to_csv())
    _write_atomic(run_dir / "layout.json", _dump(mat.layout_dict()))
    print(f"wrote {mat.shape[0]}x{mat.shape[1]} {mat.feature_set} matrix to {run_dir}")
    return 0


def cmd_rank(args) -> int:
    config = _config(args)
    if not config.label:
        raise ConfigInvalid("feature ranking needs a label field")
    _, labels, mat = _features(config)
    ranking = {
        "feature_set": mat.feature_set,
        "variant": mat.variant,
        "anova": [{"feature": n, "f": None if f == float("inf") else f,
                   "infinite": f == float("inf")} for n, f in anova_f_rank(mat, labels)],
        "chi_square": [{"feature": n, "chi2": c} for n, c in chi_square_rank(mat, labels)],
    }
    path = run_dir_for(config) / "ranking.json"
    _write_atomic(path, _dump(ranking))
    for row in ranking["anova"][: args.top]:
        f = "inf" if row["infinite"] else f"{row['f']:.4f}"
        print(f"{row['feature']}\t{f}")
    return 0


def cmd_export_graph(args) -> int:
    graph = parse_graph_json(Path(args.graph).read_text(encoding="utf-8"))
    text = export_graph(graph, args.format)
    if args.output:
        _write_atomic(Path(args.output), text)
    else:
        sys.stdout.write(text)
    return 0


def _run(args, task: Optional[str] = None) -> int:
    config = _config(args, task=task)
    result = run_experiment(config)
    f1 = result.report.get("weighted_f1")
    print(f"run {config_hash(config)}: weighted_f1="
          f"{'n/a' if f1 is None else format(f1, '.4f')} -> {result.run_dir}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stylograph",
        description="Word2vec-graph stylometry: author attribution and genre detection.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    for name, func, help_text in (
        ("ingest", cmd_ingest, "load and tokenize a corpus, print a summary"),
        ("embed", cmd_embed, "train (and cache) per-document embeddings"),
        ("graph", cmd_graph, "build per-document Word2vec graphs"),
        ("features", cmd_features, "write the feature matrix as CSV"),
        ("run", lambda a: _run(a), "full pipeline as configured"),
        ("classify", lambda a: _run(a, "classify"), "full pipeline with the SVM task"),
        ("cluster", lambda a: _run(a, "cluster"), "full pipeline with the clustering task"),
    ):
        p = sub.add_parser(name, help=help_text)
        _common(p)
        p.set_defaults(func=func)

    p = sub.add_parser("rank-features", help="ANOVA F ranking with a chi-square cross-check")
    _common(p)
    p.add_argument("--top", type=int, default=20, help="rows to print")
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("export-graph", help="convert a graph JSON file to DOT or JSON")
    p.add_argument("graph", help="graph JSON file")
    p.add_argument("--format", choices=["dot", "json"], default="dot")
    p.add_argument("--output", "-o", help="write here instead of stdout")
    p.add_argument("-v", "--verbose", action="store_true")
    p.set_defaults(func=cmd_export_graph)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ConfigInvalid as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (StylographError, OSError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
