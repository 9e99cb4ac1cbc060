"""Command-line interface: preprocess, fit, topics, eval, run, sweep.

Flags mirror RunConfig fields; a ``--config`` key-value file supplies
defaults and command-line flags override it.  Failures print one
machine-readable JSON object to stderr and exit nonzero.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from . import pipeline
from .clustering import load_model, save_model
from .embeddings import normalize_rows
from .errors import ClusterTopicsError
from .evaluation import evaluate_run
from .pipeline import RunConfig, SWEEP_AXES, Workspace, config_from_sources, parse_config_file
from .topics import extract_top_j, load_topics_json, rerank, save_topics_json, save_topics_text
from .weighting import SCHEMES, scheme_weights


def _add_config_flags(p: argparse.ArgumentParser) -> None:
    defaults = RunConfig()
    p.add_argument("--config", help="key-value config file (CLI flags override it)")
    p.add_argument("--corpus", dest="corpus_path", help="corpus file or 20NG directory")
    p.add_argument(
        "--corpus-format", dest="corpus_format", choices=pipeline.CORPUS_FORMATS,
        help=f"corpus layout (default {defaults.corpus_format})",
    )
    p.add_argument(
        "--split-file", dest="split_path",
        help="test-document line numbers, lines format only",
    )
    p.add_argument("--embeddings", dest="embedding_path", help="embedding file")
    p.add_argument(
        "--embedding-format", dest="embedding_format",
        choices=["word2vec_text", "word2vec_binary", "glove_text"],
        help=f"embedding file format (default {defaults.embedding_format})",
    )
    p.add_argument(
        "--algorithm", choices=["km", "sk", "kd", "gmm"],
        help=f"clustering algorithm (default {defaults.algorithm})",
    )
    p.add_argument("--k", type=int, help=f"number of clusters (default {defaults.k})")
    p.add_argument(
        "--top-words", dest="top_words", type=int,
        help=f"words reported per topic (default {defaults.top_words})",
    )
    p.add_argument(
        "--weight-scheme", dest="weight_scheme", choices=list(SCHEMES),
        help=f"clustering weights (default {defaults.weight_scheme})",
    )
    p.add_argument(
        "--rerank-scheme", dest="rerank_scheme",
        choices=["none", "tf", "tf_idf", "tf_df"],
        help=f"rerank top words by this scheme (default {defaults.rerank_scheme})",
    )
    p.add_argument(
        "--rerank-window", dest="rerank_window", type=int,
        help=f"proximity candidates eligible for reranking (default {defaults.rerank_window})",
    )
    p.add_argument(
        "--pca-dim", dest="pca_dim", type=int,
        help="reduce embeddings to this dimension before clustering (default: keep native)",
    )
    p.add_argument(
        "--seeds", help=f"comma-separated seeds (default {','.join(map(str, defaults.seeds))})",
    )
    p.add_argument(
        "--npmi-window", dest="npmi_window", type=int,
        help=f"coherence window in tokens, 0 = whole document (default {defaults.npmi_window})",
    )
    p.add_argument("--min-df", dest="min_df", type=int,
                   help=f"minimum document frequency (default {defaults.min_df})")
    p.add_argument("--stopwords", dest="stopword_path", help="stopword file")
    p.add_argument("--out", dest="output_dir", help=f"output directory (default {defaults.output_dir})")


def _build_config(args: argparse.Namespace) -> RunConfig:
    field_names = {f.name for f in dataclasses.fields(RunConfig)}
    overrides = {
        k: v for k, v in vars(args).items() if k in field_names and v is not None
    }
    file_values = parse_config_file(args.config) if args.config else None
    return config_from_sources(file_values, overrides)


def _cmd_preprocess(args) -> int:
    config = _build_config(args)
    ws = Workspace(config)
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    pipeline.write_tokens(ws, out)
    ws.vocab.save_tsv(out / "vocabulary.tsv")
    print(f"vocabulary: {len(ws.vocab)} types, {ws.vocab.total_tokens} tokens "
          f"over {ws.vocab.num_docs} train documents -> {out / 'vocabulary.tsv'}")
    return 0


def _fit_models(config: RunConfig, ws: Workspace):
    table, wvocab = ws.table(config.pca_dim)
    if config.algorithm == "sk":
        table = normalize_rows(table)
    weights = None
    if config.weight_scheme != "uniform":
        weights = scheme_weights(config.weight_scheme, wvocab, ws.train_docs)
    out = Path(config.output_dir)
    (out / "models").mkdir(parents=True, exist_ok=True)
    models = []
    for seed in config.seeds:
        model = pipeline._FITTERS[config.algorithm](table, config.k, weights=weights, seed=seed)
        save_model(model, out / "models" / f"{seed}.json")
        models.append(model)
    return table, wvocab, models


def _cmd_fit(args) -> int:
    config = _build_config(args)
    ws = Workspace(config)
    _, _, models = _fit_models(config, ws)
    print(f"fitted {len(models)} {config.algorithm} model(s) with k={config.k} "
          f"-> {Path(config.output_dir) / 'models'}")
    return 0


def _cmd_topics(args) -> int:
    config = _build_config(args)
    ws = Workspace(config)
    table, wvocab = ws.table(config.pca_dim)
    if config.algorithm == "sk":
        table = normalize_rows(table)
    out = Path(config.output_dir)
    (out / "topics").mkdir(parents=True, exist_ok=True)
    rerank_weights = None
    if config.rerank_scheme != "none":
        rerank_weights = scheme_weights(config.rerank_scheme, wvocab, ws.train_docs)
    for seed in config.seeds:
        model_path = out / "models" / f"{seed}.json"
        if not model_path.exists():
            raise FileNotFoundError(f"{model_path}: run the fit stage first")
        model = load_model(model_path)
        ts = extract_top_j(model, table, wvocab, n_words=config.top_words,
                           weight_scheme=config.weight_scheme)
        if rerank_weights is not None:
            ts = rerank(ts, model, table, wvocab, rerank_weights,
                        window=config.rerank_window, n_words=config.top_words)
        save_topics_json(ts, out / "topics" / f"{seed}.json")
        save_topics_text(ts, out / "topics" / f"{seed}.txt")
    print(f"wrote topics for seeds {','.join(map(str, config.seeds))} -> {out / 'topics'}")
    return 0


def _cmd_eval(args) -> int:
    config = _build_config(args)
    ws = Workspace(config)
    out = Path(config.output_dir)
    topic_sets = []
    for seed in config.seeds:
        path = out / "topics" / f"{seed}.json"
        if not path.exists():
            raise FileNotFoundError(f"{path}: run the topics stage first")
        topic_sets.append(load_topics_json(path))
    report = evaluate_run(topic_sets, ws.index)
    payload = {"config": dataclasses.asdict(config), "report": report.to_dict()}
    with open(out / "report.json", "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, sort_keys=True, indent=1)
        fh.write("\n")
    print(f"mean NPMI {report.mean:+.4f} (std {report.std_dev:.4f}) "
          f"over {len(config.seeds)} seed(s) -> {out / 'report.json'}")
    return 0


def _cmd_run(args) -> int:
    config = _build_config(args)
    report, _ = pipeline.run(config)
    print(f"mean NPMI {report.mean:+.4f} (std {report.std_dev:.4f}); "
          f"artifacts in {config.output_dir}")
    return 0


def _cmd_sweep(args) -> int:
    config = _build_config(args)
    values = args.values.split(",")
    rows = pipeline.sweep(config, args.axis, values)
    failures = [r for r in rows if r.get("error")]
    path = Path(config.output_dir) / f"sweep-{args.axis}.csv"
    print(f"{len(rows) - len(failures)}/{len(rows)} cells succeeded -> {path}")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="clustertopics",
        description="Topic modeling by clustering pre-trained word embeddings.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    commands = {
        "preprocess": ("build the vocabulary and tokenized splits", _cmd_preprocess),
        "fit": ("fit clustering models, one per seed", _cmd_fit),
        "topics": ("extract (and optionally rerank) top words from fitted models", _cmd_topics),
        "eval": ("score saved topics with NPMI on the test split", _cmd_eval),
        "run": ("full pipeline: preprocess, fit, topics, eval", _cmd_run),
        "sweep": ("repeat run over one axis, collecting a matrix CSV", _cmd_sweep),
    }
    for name, (help_text, _) in commands.items():
        p = sub.add_parser(name, help=help_text)
        _add_config_flags(p)
        if name == "sweep":
            p.add_argument("--axis", required=True, choices=list(SWEEP_AXES))
            p.add_argument("--values", required=True,
                           help="comma-separated values for the axis")
    args = parser.parse_args(argv)
    try:
        return commands[args.command][1](args)
    except (ClusterTopicsError, ValueError, OSError) as exc:
        context = {
            k: v for k, v in vars(args).items()
            if v is not None and not callable(v) and k != "command"
        }
        json.dump(
            {
                "error": type(exc).__name__,
                "message": str(exc),
                "command": args.command,
                "config": context,
            },
            sys.stderr,
            sort_keys=True,
        )
        sys.stderr.write("\n")
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
