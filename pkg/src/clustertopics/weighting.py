"""Per-type scoring schemes used for weighted clustering and reranking.

Three corpus-derived schemes plus the uniform baseline:

  tf      term_freq[t] / total_tokens            (corpus-global ratio)
  tf-df   tf(t) * doc_freq[t] / num_docs
  tf-idf  sum over documents d of (f_td / len(d)) * ln(num_docs / (doc_freq[t] + 1)),
          clamped at zero from below

The natural log is used throughout; the base only rescales weights
uniformly, which changes neither weighted-clustering fixed points nor
rerank order.  Uniform weights are exactly 1.0 per type so the weighted
code path reproduces the unweighted one bit for bit.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .corpus import Document, Vocabulary

SCHEMES = ("uniform", "tf", "tf_idf", "tf_df")


@dataclass(frozen=True)
class WeightVector:
    """Nonnegative per-type scores aligned with a working vocabulary."""

    scheme: str
    weights: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.float64)
        object.__setattr__(self, "weights", w)
        if w.ndim != 1:
            raise ValueError("weights must be one-dimensional")
        if np.any(w < 0) or not np.any(w > 0):
            raise ValueError("weights must be nonnegative with at least one positive")

    def save_tsv(self, vocab: Vocabulary, path: str | Path) -> None:
        """Write ``type<TAB>weight`` rows for auditing."""
        if len(vocab) != self.weights.shape[0]:
            raise ValueError("vocabulary and weight vector sizes differ")
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            for t, w in zip(vocab.types, self.weights):
                fh.write(f"{t}\t{w!r}\n")


def uniform_weights(vocab: Vocabulary) -> WeightVector:
    return WeightVector("uniform", np.ones(len(vocab)))


def tf_weights(vocab: Vocabulary) -> WeightVector:
    if vocab.total_tokens <= 0:
        raise ValueError("vocabulary has no tokens")
    tf = np.asarray(vocab.term_freq, dtype=np.float64) / vocab.total_tokens
    return WeightVector("tf", tf)


def tf_df_weights(vocab: Vocabulary) -> WeightVector:
    if vocab.num_docs <= 0:
        raise ValueError("vocabulary has no documents")
    tf = tf_weights(vocab).weights
    df_ratio = np.asarray(vocab.doc_freq, dtype=np.float64) / vocab.num_docs
    return WeightVector("tf_df", tf * df_ratio)


def tf_idf_weights(vocab: Vocabulary, docs: Sequence[Document]) -> WeightVector:
    """Aggregate per-document tf (f_td / len(d)) into one idf-scaled value per type.

    ``docs`` must be the train split the vocabulary was built from; document
    length is the full preprocessed token count, including tokens outside
    the working vocabulary.  Types present in every document get a negative
    idf factor and are clamped to zero (negative clustering weights are
    undefined).
    """
    if vocab.num_docs <= 0:
        raise ValueError("vocabulary has no documents")
    index = vocab.index
    tf_sum = np.zeros(len(vocab))
    for doc in docs:
        length = len(doc.tokens)
        if length == 0:
            continue
        for token, count in Counter(doc.tokens).items():
            pos = index.get(token)
            if pos is not None:
                tf_sum[pos] += count / length
    idf = np.array(
        [math.log(vocab.num_docs / (df + 1)) for df in vocab.doc_freq]
    )
    return WeightVector("tf_idf", np.maximum(tf_sum * idf, 0.0))


def scheme_weights(
    scheme: str, vocab: Vocabulary, docs: Sequence[Document] | None = None
) -> WeightVector:
    """Build the named scheme; ``docs`` is required for tf_idf only."""
    if scheme == "uniform":
        return uniform_weights(vocab)
    if scheme == "tf":
        return tf_weights(vocab)
    if scheme == "tf_df":
        return tf_df_weights(vocab)
    if scheme == "tf_idf":
        if docs is None:
            raise ValueError("tf_idf weights need the train documents")
        return tf_idf_weights(vocab, docs)
    raise ValueError(f"unknown weighting scheme {scheme!r}; use one of {SCHEMES}")
