"""Deterministic synthetic corpora and embeddings for benchmarks and checks.

Real newsgroup-style corpora pair a Zipfian vocabulary with theme-clustered
embedding geometry: every theme has a few frequent anchor words, a long
tail of rare ones at comparable embedding distance from the theme center,
and a handful of broad words that appear across most documents.  The
generator reproduces exactly that structure at desk scale, so pipeline
behavior measured on it (rare-word halos around centroids, the effect of
frequency reranking, weighting-scheme orderings) carries over to the real
thing.  Everything is a pure function of the config seed.

``python -m clustertopics.synth --out DIR`` writes the corpus, split and
embedding files in the formats the pipeline loads.
"""

from __future__ import annotations

import argparse
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .corpus import TEST, TRAIN, Document, load_stopwords

_SYLLABLES = [
    c + v
    for c in "bdfgklmnprstvz"
    for v in ("a", "e", "i", "o", "u", "ar", "en", "il", "or", "ul")
]


@dataclass(frozen=True)
class SynthConfig:
    n_themes: int = 10
    exclusive_per_theme: int = 220
    broad_per_theme: int = 3
    bursty_per_theme: int = 80
    zipf_exponent: float = 1.03
    n_train_docs: int = 3000
    n_test_docs: int = 2000
    mean_doc_len: int = 40
    min_doc_len: int = 15
    embedding_dim: int = 200
    separation: float = 2.2
    noise: float = 1.0
    broad_home_mass: float = 0.06
    broad_background_mass: float = 0.10
    bursty_activation: float = 0.55  # peak chance a bursty type is active in a home doc
    bursty_width: float = 0.04  # activation window around the type's event time
    bursty_mass: float = 0.12  # token share of the active bursty types
    oov_fraction: float = 0.02
    seed: int = 20


@dataclass(frozen=True)
class SynthCorpus:
    config: SynthConfig
    docs: list[Document]
    types: list[str]  # full inventory, theme-major order
    theme_of_type: np.ndarray  # theme id per type (broad types: home theme)
    vectors: np.ndarray  # (n_types, dim)
    oov_types: frozenset[str]  # types deliberately absent from the embedding file
    doc_theme: np.ndarray  # true theme per document

    @property
    def train_docs(self) -> list[Document]:
        return [d for d in self.docs if d.split == TRAIN]

    @property
    def test_docs(self) -> list[Document]:
        return [d for d in self.docs if d.split == TEST]


def _make_words(count: int, rng: np.random.Generator) -> list[str]:
    """Pseudo-words (pure lowercase letters) avoiding stopwords and duplicates."""
    stop = load_stopwords()
    words: list[str] = []
    seen = set(stop)
    while len(words) < count:
        n_syll = rng.integers(2, 5)
        word = "".join(_SYLLABLES[i] for i in rng.integers(0, len(_SYLLABLES), n_syll))
        if word not in seen:
            seen.add(word)
            words.append(word)
    return words


def _zipf(n: int, exponent: float) -> np.ndarray:
    ranks = np.arange(1, n + 1, dtype=np.float64)
    p = ranks**-exponent
    return p / p.sum()


def generate(config: SynthConfig = SynthConfig()) -> SynthCorpus:
    rng = np.random.default_rng(config.seed)
    t = config.n_themes
    e, b, u = config.exclusive_per_theme, config.broad_per_theme, config.bursty_per_theme
    block = e + b + u
    n_types = t * block
    words = _make_words(n_types, rng)

    # theme-major inventory: theme i owns [i*block, (i+1)*block) laid out as
    # [exclusive | broad | bursty]
    theme_of_type = np.repeat(np.arange(t), block)
    broad_ids = np.concatenate(
        [np.arange(i * block + e, i * block + e + b) for i in range(t)]
    )

    # base token distribution per theme; bursty types are overlaid per document
    exclusive_mass = (
        1.0 - config.broad_home_mass - config.broad_background_mass
    )
    theme_probs = np.zeros((t, n_types))
    for i in range(t):
        lo = i * block
        theme_probs[i, lo: lo + e] = exclusive_mass * _zipf(e, config.zipf_exponent)
        theme_probs[i, lo + e: lo + e + b] = config.broad_home_mass * _zipf(
            b, config.zipf_exponent
        )
        theme_probs[i, broad_ids] += config.broad_background_mass / broad_ids.size
        theme_probs[i] /= theme_probs[i].sum()

    n_docs = config.n_train_docs + config.n_test_docs
    doc_theme = rng.integers(0, t, size=n_docs)
    lengths = np.maximum(rng.poisson(config.mean_doc_len, size=n_docs), config.min_doc_len)
    # documents are laid out in time order and split bydate-style (train is
    # the earlier 60%); every bursty type is an "event" active only near its
    # own moment, so many burst words live entirely in one split
    event_time = rng.random((t, u))
    docs = []
    for d in range(n_docs):
        theme = doc_theme[d]
        p = theme_probs[theme]
        doc_time = d / n_docs
        gap = (doc_time - event_time[theme]) / config.bursty_width
        active = np.flatnonzero(
            rng.random(u) < config.bursty_activation * np.exp(-gap * gap)
        )
        if active.size:
            p = p * (1.0 - config.bursty_mass)
            bursty_lo = theme * block + e + b
            p[bursty_lo + active] += config.bursty_mass / active.size
        token_ids = rng.choice(n_types, size=lengths[d], p=p)
        split = TRAIN if d < config.n_train_docs else TEST
        docs.append(
            Document(
                id=f"synth-{split}-{d:05d}",
                tokens=tuple(words[i] for i in token_ids),
                split=split,
            )
        )

    # embedding geometry: orthonormal theme directions, identical isotropic
    # noise for every type regardless of frequency
    directions = np.linalg.qr(
        rng.standard_normal((config.embedding_dim, t))
    )[0].T  # (t, dim) orthonormal rows
    centers = directions * config.separation
    noise = rng.standard_normal((n_types, config.embedding_dim)) * (
        config.noise / np.sqrt(config.embedding_dim)
    )
    vectors = centers[theme_of_type] + noise

    # a deterministic slice of exclusive types is left out of the embedding
    # file, exercising the out-of-vocabulary path
    exclusive_mask = np.zeros(n_types, dtype=bool)
    for i in range(t):
        exclusive_mask[i * block: i * block + e] = True
    n_oov = int(round(config.oov_fraction * n_types))
    oov_ids = rng.choice(np.flatnonzero(exclusive_mask), size=n_oov, replace=False)
    return SynthCorpus(
        config=config,
        docs=docs,
        types=words,
        theme_of_type=theme_of_type,
        vectors=vectors,
        oov_types=frozenset(words[i] for i in oov_ids),
        doc_theme=doc_theme,
    )


def embedding_variant(
    corpus: SynthCorpus,
    seed: int,
    separation: float | None = None,
    noise: float | None = None,
) -> np.ndarray:
    """Re-draw the embedding geometry for the same corpus.

    Stands in for switching between embedding methods trained on different
    data: same types and counts, different (but equally theme-clustered)
    vectors.
    """
    cfg = corpus.config
    rng = np.random.default_rng(seed)
    separation = cfg.separation if separation is None else separation
    noise_scale = cfg.noise if noise is None else noise
    directions = np.linalg.qr(
        rng.standard_normal((cfg.embedding_dim, cfg.n_themes))
    )[0].T
    centers = directions * separation
    draw = rng.standard_normal((len(corpus.types), cfg.embedding_dim)) * (
        noise_scale / np.sqrt(cfg.embedding_dim)
    )
    return centers[corpus.theme_of_type] + draw


def write_corpus(corpus: SynthCorpus, docs_path: str | Path, split_path: str | Path) -> None:
    """One document per line plus the companion test-line-number file."""
    with open(docs_path, "w", encoding="utf-8", newline="\n") as fh:
        for doc in corpus.docs:
            fh.write(" ".join(doc.tokens) + "\n")
    with open(split_path, "w", encoding="utf-8", newline="\n") as fh:
        for lineno, doc in enumerate(corpus.docs, start=1):
            if doc.split == TEST:
                fh.write(f"{lineno}\n")


def write_embedding_file(
    corpus: SynthCorpus,
    path: str | Path,
    format: str = "glove_text",
    vectors: np.ndarray | None = None,
) -> None:
    """Write the type vectors, skipping the designated out-of-file types."""
    if vectors is None:
        vectors = corpus.vectors
    rows = [
        (word, vectors[i])
        for i, word in enumerate(corpus.types)
        if word not in corpus.oov_types
    ]
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        if format == "word2vec_text":
            fh.write(f"{len(rows)} {vectors.shape[1]}\n")
        elif format != "glove_text":
            raise ValueError(f"unsupported output format {format!r}")
        for word, vec in rows:
            fh.write(word + " " + " ".join(f"{v:.6f}" for v in vec) + "\n")


def make_blobs(
    n: int, dim: int, k: int, seed: int = 0, spread: float = 5.0
) -> np.ndarray:
    """Gaussian blob data for scaling benchmarks; pure function of the seed."""
    rng = np.random.default_rng(seed)
    centers = rng.standard_normal((k, dim)) * spread
    assign = rng.integers(0, k, size=n)
    return centers[assign] + rng.standard_normal((n, dim))


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        description="Write a synthetic benchmark corpus and its embedding file."
    )
    parser.add_argument("--out", required=True, help="output directory")
    parser.add_argument("--seed", type=int, default=SynthConfig.seed)
    parser.add_argument("--themes", type=int, default=SynthConfig.n_themes)
    parser.add_argument(
        "--format", choices=["glove_text", "word2vec_text"], default="glove_text"
    )
    args = parser.parse_args(argv)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    corpus = generate(SynthConfig(seed=args.seed, n_themes=args.themes))
    write_corpus(corpus, out / "docs.txt", out / "test-lines.txt")
    suffix = "glove.txt" if args.format == "glove_text" else "w2v.txt"
    write_embedding_file(corpus, out / f"vectors.{suffix}", args.format)
    print(f"wrote {len(corpus.docs)} docs, {len(corpus.types)} types to {out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
