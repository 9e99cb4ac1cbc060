"""End-to-end orchestration: corpus -> vocabulary -> embeddings -> clusters ->
top words -> coherence, with per-seed artifacts, disk caching, and sweeps.

Every run persists its intermediates under the output directory:

    vocabulary.tsv        train-split vocabulary (counts)
    tokens-train.txt      preprocessed documents, one per line
    tokens-test.txt
    weights-<scheme>.tsv  weight vectors used for clustering / reranking
    models/<seed>.json    fitted models
    topics/<seed>.json    topic sets (plus .txt for eyeballing)
    report.json           aggregated coherence
    results.csv           one row per configuration cell
    cache/                content-hash-keyed intermediates

Outputs are a pure function of (config, input files): rerunning the same
config overwrites every file with identical bytes.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Sequence

from .clustering import (
    fit_gmm,
    fit_kmeans,
    fit_kmedoids,
    fit_spherical_kmeans,
    save_model,
)
from .corpus import (
    TEST,
    TRAIN,
    Document,
    Vocabulary,
    build_vocabulary,
    load_20ng,
    load_lines,
    load_stopwords,
    split_documents,
    DEFAULT_STOPWORD_FILE,
)
from .embeddings import (
    load_embeddings,
    normalize_rows,
    pca_reduce,
    save_word2vec_text,
)
from .errors import ClusterTopicsError
from .evaluation import (
    NpmiReport,
    build_index,
    evaluate_run,
    load_index,
    save_index,
)
from .topics import TopicSet, extract_top_j, rerank, save_topics_json, save_topics_text
from .weighting import scheme_weights

CORPUS_FORMATS = ("lines", "20ng")
SWEEP_AXES = ("pca_dims", "algorithms", "weight_schemes", "rerank_schemes")

_FITTERS = {
    "km": fit_kmeans,
    "sk": fit_spherical_kmeans,
    "kd": fit_kmedoids,
    "gmm": fit_gmm,
}


@dataclass(frozen=True)
class RunConfig:
    """One experiment cell; fields mirror the CLI flags."""

    corpus_path: str = ""
    corpus_format: str = "lines"  # "lines" or "20ng"
    split_path: str = ""  # companion test-line file, lines format only
    embedding_path: str = ""
    embedding_format: str = "glove_text"
    algorithm: str = "km"
    k: int = 20
    top_words: int = 10
    weight_scheme: str = "uniform"
    rerank_scheme: str = "none"
    rerank_window: int = 100
    pca_dim: int = 0  # 0 = keep native dimensionality
    seeds: tuple[int, ...] = (0, 1, 2, 3, 4)
    npmi_window: int = 10  # 0 = whole-document windows
    min_df: int = 5
    stopword_path: str = str(DEFAULT_STOPWORD_FILE)
    output_dir: str = "runs/out"

    def validate(self) -> None:
        if self.k < 1:
            raise ValueError("k must be at least 1")
        if self.top_words < 1:
            raise ValueError("top_words must be at least 1")
        if self.rerank_window < self.top_words:
            raise ValueError("rerank_window must be at least top_words")
        if not self.seeds:
            raise ValueError("seeds must be nonempty")
        if self.corpus_format not in CORPUS_FORMATS:
            raise ValueError(f"corpus_format must be one of {CORPUS_FORMATS}")
        if self.algorithm not in _FITTERS:
            raise ValueError(f"algorithm must be one of {tuple(_FITTERS)}")
        if self.corpus_format == "lines" and not self.split_path:
            raise ValueError("lines corpus needs a split_path")


def parse_config_file(path: str | Path) -> dict[str, str]:
    """Key-value config grammar: one ``key = value`` per line, ``#`` comments.

    Keys are RunConfig field names; ``seeds`` is a comma-separated list.
    """
    values: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}, line {lineno}: expected 'key = value'")
            key, value = line.split("=", 1)
            values[key.strip()] = value.strip()
    return values


def config_from_sources(file_values: dict | None = None, overrides: dict | None = None) -> RunConfig:
    """Build a RunConfig with precedence: overrides > file values > defaults."""
    merged: dict = {}
    fields = {f.name: f for f in dataclasses.fields(RunConfig)}
    for source in (file_values or {}), (overrides or {}):
        for key, value in source.items():
            if value is None:
                continue
            if key not in fields:
                raise ValueError(f"unknown config key {key!r}")
            if isinstance(value, str):
                ftype = fields[key].type
                if key == "seeds":
                    value = tuple(int(s) for s in value.replace(",", " ").split())
                elif ftype == "int":
                    value = int(value)
            elif key == "seeds":
                value = tuple(value)
            merged[key] = value
    config = RunConfig(**merged)
    config.validate()
    return config


def _digest_file(path: str | Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _digest_parts(*parts) -> str:
    return hashlib.sha256("|".join(str(p) for p in parts).encode()).hexdigest()[:16]


class Workspace:
    """Shared, lazily loaded intermediates for one corpus + embedding pair.

    A sweep reuses one workspace across cells, so the vocabulary, the
    co-occurrence index, and the loaded embedding table are computed once.
    Disk caching (content-hash keyed) makes repeated CLI invocations cheap.
    """

    def __init__(self, config: RunConfig, cache_dir: str | Path | None = None):
        self.config = config
        self.cache_dir = Path(cache_dir) if cache_dir else Path(config.output_dir) / "cache"
        self._docs = None
        self._vocab = None
        self._index = None
        self._tables = {}  # pca_dim -> (EmbeddingTable, Vocabulary)
        self._corpus_digest = None
        self._stopword_digest = None

    # -- corpus ----------------------------------------------------------
    @property
    def corpus_digest(self) -> str:
        if self._corpus_digest is None:
            cfg = self.config
            if cfg.corpus_format == "20ng":
                root = Path(cfg.corpus_path)
                files = sorted(p for p in root.rglob("*") if p.is_file())
                self._corpus_digest = _digest_parts(
                    "20ng", *[f"{p.relative_to(root)}:{_digest_file(p)}" for p in files]
                )
            else:
                self._corpus_digest = _digest_parts(
                    "lines", _digest_file(cfg.corpus_path), _digest_file(cfg.split_path)
                )
        return self._corpus_digest

    @property
    def stopword_digest(self) -> str:
        if self._stopword_digest is None:
            self._stopword_digest = _digest_file(self.config.stopword_path)
        return self._stopword_digest

    @property
    def docs(self) -> list[Document]:
        if self._docs is None:
            cfg = self.config
            stopwords = load_stopwords(cfg.stopword_path)
            if cfg.corpus_format == "20ng":
                self._docs = load_20ng(cfg.corpus_path, stopwords=stopwords)
            else:
                self._docs = load_lines(cfg.corpus_path, cfg.split_path, stopwords=stopwords)
        return self._docs

    @property
    def train_docs(self) -> list[Document]:
        return split_documents(self.docs, TRAIN)

    @property
    def test_docs(self) -> list[Document]:
        return split_documents(self.docs, TEST)

    # -- cached intermediates ---------------------------------------------
    @property
    def vocab(self) -> Vocabulary:
        if self._vocab is None:
            cfg = self.config
            key = _digest_parts(
                "vocab", self.corpus_digest, self.stopword_digest, cfg.min_df
            )
            cached = self.cache_dir / f"vocab-{key}.tsv"
            if cached.exists():
                self._vocab = Vocabulary.load_tsv(cached)
            else:
                self._vocab = build_vocabulary(self.train_docs, min_df=cfg.min_df)
                self.cache_dir.mkdir(parents=True, exist_ok=True)
                self._vocab.save_tsv(cached)
        return self._vocab

    @property
    def index(self):
        if self._index is None:
            cfg = self.config
            window = cfg.npmi_window if cfg.npmi_window > 0 else None
            key = _digest_parts(
                "index", self.corpus_digest, self.stopword_digest, window
            )
            cached = self.cache_dir / f"index-{key}.tsv"
            if cached.exists():
                self._index = load_index(cached)
            else:
                self._index = build_index(self.test_docs, window_size=window)
                self.cache_dir.mkdir(parents=True, exist_ok=True)
                save_index(self._index, cached)
        return self._index

    def table(self, pca_dim: int = 0):
        """The loaded (and optionally PCA-reduced) table + working vocabulary."""
        if pca_dim not in self._tables:
            cfg = self.config
            if pca_dim == 0:
                key = _digest_parts(
                    "table", _digest_file(cfg.embedding_path), cfg.embedding_format,
                    self.corpus_digest, self.stopword_digest, cfg.min_df,
                )
                cached = self.cache_dir / f"table-{key}.w2v.txt"
                if cached.exists():
                    table, wvocab = load_embeddings(
                        cached, "word2vec_text", self.vocab,
                        source_name=Path(cfg.embedding_path).stem,
                    )
                else:
                    table, wvocab = load_embeddings(
                        cfg.embedding_path, cfg.embedding_format, self.vocab
                    )
                    self.cache_dir.mkdir(parents=True, exist_ok=True)
                    save_word2vec_text(table, wvocab, cached)
            else:
                base, wvocab = self.table(0)
                table = pca_reduce(base, pca_dim)
            self._tables[pca_dim] = (table, wvocab)
        return self._tables[pca_dim]


def _write_csv_rows(path: Path, rows: Sequence[dict]) -> None:
    columns = [
        "embedding", "algorithm", "weight_scheme", "rerank_scheme", "pca_dim",
        "k", "top_words", "seeds", "npmi_mean", "npmi_std", "error",
    ]
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(str(row.get(c, "")) for c in columns) + "\n")


def _result_row(config: RunConfig, source: str, report: NpmiReport | None, error: str = "") -> dict:
    row = {
        "embedding": source,
        "algorithm": config.algorithm,
        "weight_scheme": config.weight_scheme,
        "rerank_scheme": config.rerank_scheme,
        "pca_dim": config.pca_dim or "",
        "k": config.k,
        "top_words": config.top_words,
        "seeds": " ".join(str(s) for s in config.seeds),
        "error": error,
    }
    if report is not None:
        row["npmi_mean"] = repr(report.mean)
        row["npmi_std"] = repr(report.std_dev)
    return row


def run(config: RunConfig, workspace: Workspace | None = None) -> tuple[NpmiReport, list[TopicSet]]:
    """Execute the full pipeline for every seed and persist all artifacts."""
    config.validate()
    ws = workspace or Workspace(config)
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)

    write_tokens(ws, out)
    ws.vocab.save_tsv(out / "vocabulary.tsv")
    table, wvocab = ws.table(config.pca_dim)
    if config.algorithm == "sk":
        table = normalize_rows(table)

    cluster_weights = None
    if config.weight_scheme != "uniform":
        cluster_weights = scheme_weights(config.weight_scheme, wvocab, ws.train_docs)
        cluster_weights.save_tsv(wvocab, out / f"weights-{config.weight_scheme}.tsv")
    rerank_weights = None
    if config.rerank_scheme != "none":
        rerank_weights = scheme_weights(config.rerank_scheme, wvocab, ws.train_docs)
        rerank_weights.save_tsv(wvocab, out / f"weights-{config.rerank_scheme}.tsv")

    (out / "models").mkdir(exist_ok=True)
    (out / "topics").mkdir(exist_ok=True)
    fitter = _FITTERS[config.algorithm]
    topic_sets = []
    for seed in config.seeds:
        model = fitter(table, config.k, weights=cluster_weights, seed=seed)
        save_model(model, out / "models" / f"{seed}.json")
        ts = extract_top_j(
            model, table, wvocab,
            n_words=config.top_words, weight_scheme=config.weight_scheme,
        )
        if rerank_weights is not None:
            ts = rerank(
                ts, model, table, wvocab, rerank_weights,
                window=config.rerank_window, n_words=config.top_words,
            )
        save_topics_json(ts, out / "topics" / f"{seed}.json")
        save_topics_text(ts, out / "topics" / f"{seed}.txt")
        topic_sets.append(ts)

    report = evaluate_run(topic_sets, ws.index)
    payload = {
        "config": dataclasses.asdict(config),
        "embedding_source": table.source_name,
        "coverage": table.coverage,
        "working_vocabulary_size": len(wvocab),
        "report": report.to_dict(),
    }
    with open(out / "report.json", "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, sort_keys=True, indent=1)
        fh.write("\n")
    _write_csv_rows(out / "results.csv", [_result_row(config, table.source_name, report)])
    return report, topic_sets


def write_tokens(ws: Workspace, out: Path) -> None:
    """Persist the preprocessed documents, one per line, per split."""
    for split, name in ((TRAIN, "tokens-train.txt"), (TEST, "tokens-test.txt")):
        with open(out / name, "w", encoding="utf-8", newline="\n") as fh:
            for doc in split_documents(ws.docs, split):
                fh.write(" ".join(doc.tokens) + "\n")


_AXIS_FIELD = {
    "pca_dims": "pca_dim",
    "algorithms": "algorithm",
    "weight_schemes": "weight_scheme",
    "rerank_schemes": "rerank_scheme",
}


def sweep(base: RunConfig, axis: str, values: Sequence) -> list[dict]:
    """One run per axis value, sharing cached intermediates; emits a matrix CSV.

    A failing cell is recorded with an error marker and the sweep continues.
    """
    if axis not in _AXIS_FIELD:
        raise ValueError(f"axis must be one of {SWEEP_AXES}")
    field = _AXIS_FIELD[axis]
    out = Path(base.output_dir)
    ws = Workspace(base)
    rows = []
    for value in values:
        typed = int(value) if field == "pca_dim" else str(value)
        cell = replace(
            base,
            **{field: typed},
            output_dir=str(out / f"sweep-{axis}" / str(value)),
        )
        try:
            cell.validate()
            report, _ = run(cell, workspace=ws)
            rows.append(_result_row(cell, ws.table(cell.pca_dim)[0].source_name, report))
        except (ClusterTopicsError, ValueError, OSError) as exc:
            rows.append(_result_row(cell, "", None, error=f"{type(exc).__name__}: {exc}"))
    _write_csv_rows(out / f"sweep-{axis}.csv", rows)
    return rows
