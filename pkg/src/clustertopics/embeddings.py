"""Pre-trained embedding files: loading, vocabulary alignment, normalization, PCA.

Supported file formats:
  * ``word2vec_text``    first line ``<n> <m>``, then ``<word> <f1> ... <fm>``.
  * ``word2vec_binary``  same ASCII header, then per entry ``<word><space>``
                         followed by m little-endian float32 values (an
                         optional trailing newline per entry is tolerated).
  * ``glove_text``       no header, ``<word> <f1> ... <fm>`` per line.

Lookup is by the exact lowercase type only; vocabulary types without a
vector (or with an all-zero vector, which no downstream criterion can use)
are dropped from the working vocabulary and recorded in ``coverage``.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .corpus import Vocabulary
from .errors import DimensionMismatch, FormatError, RankDeficient, ZeroVector

FORMATS = ("word2vec_text", "word2vec_binary", "glove_text")


@dataclass(frozen=True)
class EmbeddingTable:
    """Dense type-vector matrix aligned with a working vocabulary.

    Row i is the vector of the working vocabulary's type i.  Rows are
    float64, finite, and never all-zero.
    """

    vectors: np.ndarray
    source_name: str
    coverage: float = 1.0

    @property
    def dim(self) -> int:
        return int(self.vectors.shape[1])

    def __len__(self) -> int:
        return int(self.vectors.shape[0])


def _parse_text_row(parts: list[str], lineno: int, path: str) -> np.ndarray:
    try:
        return np.array([float(x) for x in parts], dtype=np.float64)
    except ValueError as exc:
        raise FormatError(f"{path}, line {lineno}: {exc}") from None


def _iter_word2vec_text(path: Path):
    with open(path, encoding="utf-8", errors="replace") as fh:
        header = fh.readline().split()
        if len(header) != 2 or not all(p.isdigit() for p in header):
            raise FormatError(f"{path}, line 1: expected '<count> <dim>' header")
        dim = int(header[1])
        for lineno, line in enumerate(fh, start=2):
            parts = line.rstrip("\n").split(" ")
            if len(parts) - 1 != dim:
                raise DimensionMismatch(
                    f"{path}, line {lineno}: {len(parts) - 1} values, header says {dim}"
                )
            yield parts[0], _parse_text_row(parts[1:], lineno, str(path))


def _iter_glove_text(path: Path):
    dim = None
    with open(path, encoding="utf-8", errors="replace") as fh:
        for lineno, line in enumerate(fh, start=1):
            parts = line.rstrip("\n").split(" ")
            if len(parts) < 2:
                raise FormatError(f"{path}, line {lineno}: no vector values")
            if dim is None:
                dim = len(parts) - 1
            elif len(parts) - 1 != dim:
                raise DimensionMismatch(
                    f"{path}, line {lineno}: {len(parts) - 1} values, first row had {dim}"
                )
            yield parts[0], _parse_text_row(parts[1:], lineno, str(path))


def _iter_word2vec_binary(path: Path):
    with open(path, "rb") as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise FormatError(f"{path}, byte 0: expected '<count> <dim>' header")
        try:
            count, dim = int(header[0]), int(header[1])
        except ValueError:
            raise FormatError(f"{path}, byte 0: non-numeric header") from None
        vec_bytes = 4 * dim
        for _ in range(count):
            word = bytearray()
            while True:
                ch = fh.read(1)
                if not ch:
                    raise FormatError(f"{path}, byte {fh.tell()}: truncated entry")
                if ch == b" ":
                    break
                if ch not in (b"\n", b"\r") or word:
                    word.extend(ch)
            raw = fh.read(vec_bytes)
            if len(raw) != vec_bytes:
                raise FormatError(f"{path}, byte {fh.tell()}: truncated vector")
            values = np.frombuffer(raw, dtype="<f4").astype(np.float64)
            yield word.decode("utf-8", errors="replace"), values


_READERS = {
    "word2vec_text": _iter_word2vec_text,
    "word2vec_binary": _iter_word2vec_binary,
    "glove_text": _iter_glove_text,
}


def load_embeddings(
    path: str | Path,
    format: str,
    vocab: Vocabulary,
    source_name: str | None = None,
) -> tuple[EmbeddingTable, Vocabulary]:
    """Load vectors for ``vocab`` and drop types the file does not cover.

    Returns the table and the reduced vocabulary; row i of the table is
    the vector of reduced type i.  Per-type counts and the corpus totals
    of the vocabulary are untouched by the reduction.
    """
    if format not in _READERS:
        raise ValueError(f"unknown embedding format {format!r}; use one of {FORMATS}")
    path = Path(path)
    wanted = vocab.index
    found: dict[int, np.ndarray] = {}
    dim = None
    for word, values in _READERS[format](path):
        if dim is None:
            dim = values.shape[0]
        if not np.all(np.isfinite(values)):
            raise FormatError(f"{path}: non-finite value in vector for {word!r}")
        pos = wanted.get(word)
        if pos is None or pos in found:
            continue  # not in vocabulary, or a duplicate entry (first wins)
        if np.any(values != 0.0):
            found[pos] = values
    keep = [i in found for i in range(len(vocab))]
    reduced = vocab.restrict(keep)
    if not reduced.types:
        raise FormatError(f"{path}: no vocabulary type has a usable vector")
    vectors = np.vstack([found[i] for i in range(len(vocab)) if keep[i]])
    table = EmbeddingTable(
        vectors=vectors,
        source_name=source_name or path.stem,
        coverage=len(reduced) / len(vocab),
    )
    return table, reduced


def save_word2vec_text(table: EmbeddingTable, vocab: Vocabulary, path: str | Path) -> None:
    """Write the table in word2vec_text format (used to cache reduced tables).

    Floats are written with ``repr`` so a reload round-trips bit-exactly.
    """
    if len(table) != len(vocab):
        raise ValueError("table and vocabulary sizes differ")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"{len(table)} {table.dim}\n")
        for word, row in zip(vocab.types, table.vectors):
            fh.write(word + " " + " ".join(repr(float(v)) for v in row) + "\n")


def normalize_rows(table: EmbeddingTable) -> EmbeddingTable:
    """Scale every row to unit Euclidean norm (required by the cosine criterion)."""
    norms = np.linalg.norm(table.vectors, axis=1)
    if np.any(norms == 0.0):
        raise ZeroVector(f"{table.source_name}: zero row cannot be normalized")
    return replace(table, vectors=table.vectors / norms[:, None])


def pca_reduce(table: EmbeddingTable, target_dim: int) -> EmbeddingTable:
    """Project rows onto the top principal components of the mean-centered table.

    Component signs are fixed (largest-magnitude coordinate made positive)
    so the projection is deterministic across runs and platforms.
    """
    n, m = table.vectors.shape
    if not 1 <= target_dim <= m:
        raise ValueError(f"target_dim must be in [1, {m}], got {target_dim}")
    centered = table.vectors - table.vectors.mean(axis=0)
    _, singular, vt = np.linalg.svd(centered, full_matrices=False)
    tol = singular.max(initial=0.0) * max(n, m) * np.finfo(np.float64).eps
    rank = int(np.sum(singular > tol))
    if rank < target_dim:
        raise RankDeficient(
            f"{table.source_name}: rank {rank} < requested dimension {target_dim}"
        )
    components = vt[:target_dim]
    flip = np.sign(components[np.arange(target_dim), np.abs(components).argmax(axis=1)])
    components = components * flip[:, None]
    return replace(
        table,
        vectors=centered @ components.T,
        source_name=f"{table.source_name}-pca{target_dim}",
    )
