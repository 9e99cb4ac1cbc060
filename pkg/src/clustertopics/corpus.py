"""Corpus ingestion: preprocessing, vocabulary construction, corpus loaders.

Preprocessing rules (fixed, version 1):
  * lowercase the raw text,
  * split on Unicode whitespace,
  * strip leading/trailing characters that are not letters or digits,
  * drop the token if anything but letters remains (digits, inner
    punctuation, symbols) or if it matches the stopword list.

Every coherence number downstream is relative to these rules and to the
bundled stopword file, so they must not change silently.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .errors import EmptyVocabulary, MissingSplit

TRAIN = "train"
TEST = "test"

_DATA_DIR = Path(__file__).parent / "data"
DEFAULT_STOPWORD_FILE = _DATA_DIR / "stopwords_en.txt"


def load_stopwords(path: str | Path = DEFAULT_STOPWORD_FILE) -> frozenset[str]:
    """Read the stopword file: one token per line, '#' comments ignored."""
    words = set()
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            word = line.strip()
            if word and not word.startswith("#"):
                words.add(word)
    return frozenset(words)


@dataclass(frozen=True)
class Document:
    """One preprocessed document with its train/test tag."""

    id: str
    tokens: tuple[str, ...]
    split: str  # TRAIN or TEST


def _clean_token(token: str) -> str | None:
    # Strip leading/trailing punctuation and symbols, then keep the token
    # only if it is pure letters (no digits, no inner punctuation).
    start, end = 0, len(token)
    while start < end and not token[start].isalnum():
        start += 1
    while end > start and not token[end - 1].isalnum():
        end -= 1
    token = token[start:end]
    if token and token.isalpha():
        return token
    return None


def preprocess(raw_text: str, stopwords: frozenset[str]) -> list[str]:
    """Turn raw text into the token sequence all counting is based on."""
    tokens = []
    for piece in raw_text.lower().split():
        token = _clean_token(piece)
        if token is not None and token not in stopwords:
            tokens.append(token)
    return tokens


@dataclass(frozen=True)
class Vocabulary:
    """Type inventory with train-split count statistics.

    ``types`` is lexicographically sorted and ``index`` maps each type to
    its position, so every array in the pipeline aligns with it.  A
    vocabulary restricted to embedding coverage (``restrict``) keeps the
    original ``total_tokens``/``num_docs`` denominators: per-type counts
    are untouched and tf weights are deliberately not renormalized after
    out-of-vocabulary filtering.
    """

    types: tuple[str, ...]
    term_freq: tuple[int, ...]
    doc_freq: tuple[int, ...]
    total_tokens: int
    num_docs: int

    @property
    def index(self) -> dict[str, int]:
        cached = self.__dict__.get("_index")
        if cached is None:
            cached = {t: i for i, t in enumerate(self.types)}
            object.__setattr__(self, "_index", cached)
        return cached

    def __len__(self) -> int:
        return len(self.types)

    def restrict(self, keep: Sequence[bool]) -> "Vocabulary":
        """Drop types where ``keep`` is False; counts and totals untouched."""
        if len(keep) != len(self.types):
            raise ValueError("keep mask length does not match vocabulary size")
        kept = [i for i, flag in enumerate(keep) if flag]
        return Vocabulary(
            types=tuple(self.types[i] for i in kept),
            term_freq=tuple(self.term_freq[i] for i in kept),
            doc_freq=tuple(self.doc_freq[i] for i in kept),
            total_tokens=self.total_tokens,
            num_docs=self.num_docs,
        )

    def save_tsv(self, path: str | Path) -> None:
        """Write ``type<TAB>term_freq<TAB>doc_freq`` rows with a totals header."""
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(f"#total_tokens={self.total_tokens} num_docs={self.num_docs}\n")
            for t, tf, df in zip(self.types, self.term_freq, self.doc_freq):
                fh.write(f"{t}\t{tf}\t{df}\n")

    @classmethod
    def load_tsv(cls, path: str | Path) -> "Vocabulary":
        with open(path, encoding="utf-8") as fh:
            header = fh.readline().strip()
            if not header.startswith("#total_tokens="):
                raise ValueError(f"{path}: missing vocabulary header line")
            total_part, docs_part = header[1:].split()
            total_tokens = int(total_part.split("=")[1])
            num_docs = int(docs_part.split("=")[1])
            types, tfs, dfs = [], [], []
            for line in fh:
                t, tf, df = line.rstrip("\n").split("\t")
                types.append(t)
                tfs.append(int(tf))
                dfs.append(int(df))
        return cls(tuple(types), tuple(tfs), tuple(dfs), total_tokens, num_docs)


def build_vocabulary(docs: Sequence[Document], min_df: int = 5) -> Vocabulary:
    """Count types over ``docs`` and keep those in at least ``min_df`` documents.

    Callers pass the train split only; the test split is reserved for
    coherence counting.
    """
    if not docs:
        raise EmptyVocabulary("cannot build a vocabulary from zero documents")
    term_freq: Counter[str] = Counter()
    doc_freq: Counter[str] = Counter()
    for doc in docs:
        term_freq.update(doc.tokens)
        doc_freq.update(set(doc.tokens))
    types = sorted(t for t, df in doc_freq.items() if df >= min_df)
    if not types:
        raise EmptyVocabulary(
            f"no type appears in at least {min_df} of the {len(docs)} documents"
        )
    kept_tf = tuple(term_freq[t] for t in types)
    return Vocabulary(
        types=tuple(types),
        term_freq=kept_tf,
        doc_freq=tuple(doc_freq[t] for t in types),
        total_tokens=sum(kept_tf),
        num_docs=len(docs),
    )


def _strip_headers(text: str) -> str:
    # Message headers end at the first blank line; keep everything after it.
    for sep in ("\n\n", "\r\n\r\n"):
        pos = text.find(sep)
        if pos != -1:
            return text[pos + len(sep):]
    return text


def load_20ng(
    path: str | Path,
    stopwords: frozenset[str] | None = None,
    strip_headers: bool = True,
) -> list[Document]:
    """Load a 20 Newsgroups "bydate" directory tree.

    Expects two subdirectories whose names end in ``-train`` and ``-test``
    (or are exactly ``train``/``test``); every file below them becomes one
    Document tagged with the archive's own split.  Files are decoded as
    UTF-8 with replacement, never fatally.
    """
    root = Path(path)
    if stopwords is None:
        stopwords = load_stopwords()
    split_dirs: dict[str, Path] = {}
    if root.is_dir():
        for child in sorted(root.iterdir()):
            if not child.is_dir():
                continue
            name = child.name.lower()
            for split in (TRAIN, TEST):
                if name == split or name.endswith(f"-{split}"):
                    split_dirs.setdefault(split, child)
    missing = [s for s in (TRAIN, TEST) if s not in split_dirs]
    if missing:
        raise MissingSplit(f"{root}: no directory for split(s) {', '.join(missing)}")

    docs = []
    for split in (TRAIN, TEST):
        base = split_dirs[split]
        for file in sorted(p for p in base.rglob("*") if p.is_file()):
            text = file.read_bytes().decode("utf-8", errors="replace")
            if strip_headers:
                text = _strip_headers(text)
            docs.append(
                Document(
                    id=str(file.relative_to(base)),
                    tokens=tuple(preprocess(text, stopwords)),
                    split=split,
                )
            )
    return docs


def load_lines(
    path: str | Path,
    split_file: str | Path,
    stopwords: frozenset[str] | None = None,
) -> list[Document]:
    """Load the generic one-document-per-line format.

    ``split_file`` lists 1-based line numbers of test documents, one per
    line; every other line is a train document.
    """
    if stopwords is None:
        stopwords = load_stopwords()
    with open(split_file, encoding="utf-8") as fh:
        test_lines = {int(line) for line in fh.read().split()}
    docs = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            split = TEST if lineno in test_lines else TRAIN
            docs.append(
                Document(
                    id=f"line-{lineno}",
                    tokens=tuple(preprocess(line, stopwords)),
                    split=split,
                )
            )
    return docs


def split_documents(docs: Iterable[Document], split: str) -> list[Document]:
    """Filter to one side of the corpus (TRAIN or TEST)."""
    return [d for d in docs if d.split == split]
