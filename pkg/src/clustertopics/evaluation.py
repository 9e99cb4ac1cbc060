"""Topic coherence on the held-out split: co-occurrence counting and NPMI.

Counting is boolean per window: a sliding window of ``window_size`` tokens
(stride 1; a short document forms a single window) counts each distinct
type once and each distinct unordered pair once.  Whole-document mode
(window_size=None) treats every document as one window.

A pair's score is ln(Pj / (P1*P2)) / (-ln Pj) with probabilities taken as
window counts over total windows.  Epsilon replaces a zero joint
probability; pairs where either word never appears in the index score the
smoothed minimum, exactly -1.  Values are asserted to lie in [-1, 1],
never clipped.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .corpus import Document
from .errors import ProvenanceMismatch
from .topics import Topic, TopicSet

DEFAULT_WINDOW = 10


@dataclass(frozen=True)
class CooccurrenceIndex:
    window_size: int | None
    unigram_counts: dict[str, int]
    pair_counts: dict[tuple[str, str], int]
    total_windows: int

    def pair_count(self, a: str, b: str) -> int:
        if a > b:
            a, b = b, a
        return self.pair_counts.get((a, b), 0)

    def default_epsilon(self) -> float:
        return 1e-3 / self.total_windows


def build_index(
    docs: Sequence[Document],
    window_size: int | None = DEFAULT_WINDOW,
    restrict_to: Iterable[str] | None = None,
) -> CooccurrenceIndex:
    """Count window occurrences and joint window occurrences over ``docs``.

    ``restrict_to`` limits which types are counted without changing window
    boundaries; restricted counts equal the full index's counts for the
    included types.
    """
    if not docs:
        raise ValueError("cannot build a co-occurrence index from zero documents")
    keep = None if restrict_to is None else frozenset(restrict_to)
    unigrams: dict[str, int] = {}
    pairs: dict[tuple[str, str], int] = {}
    total = 0

    def count_window(window: Sequence[str]) -> None:
        if keep is None:
            present = sorted(set(window))
        else:
            present = sorted({t for t in window if t in keep})
        for t in present:
            unigrams[t] = unigrams.get(t, 0) + 1
        for a, b in itertools.combinations(present, 2):
            pairs[(a, b)] = pairs.get((a, b), 0) + 1

    for doc in docs:
        tokens = doc.tokens
        if window_size is None or len(tokens) <= window_size:
            total += 1
            count_window(tokens)
        else:
            for start in range(len(tokens) - window_size + 1):
                total += 1
                count_window(tokens[start: start + window_size])
    return CooccurrenceIndex(
        window_size=window_size,
        unigram_counts=unigrams,
        pair_counts=pairs,
        total_windows=total,
    )


def save_index(index: CooccurrenceIndex, path) -> None:
    """Write the index as a sorted, deterministic text file (cache format)."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        window = "doc" if index.window_size is None else index.window_size
        fh.write(f"#window={window} total_windows={index.total_windows}\n")
        for t in sorted(index.unigram_counts):
            fh.write(f"1\t{t}\t{index.unigram_counts[t]}\n")
        for a, b in sorted(index.pair_counts):
            fh.write(f"2\t{a}\t{b}\t{index.pair_counts[(a, b)]}\n")


def load_index(path) -> CooccurrenceIndex:
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip()
        if not header.startswith("#window="):
            raise ValueError(f"{path}: not a co-occurrence index file")
        window_part, total_part = header[1:].split()
        window_value = window_part.split("=")[1]
        window = None if window_value == "doc" else int(window_value)
        total = int(total_part.split("=")[1])
        unigrams: dict[str, int] = {}
        pairs: dict[tuple[str, str], int] = {}
        for line in fh:
            fields = line.rstrip("\n").split("\t")
            if fields[0] == "1":
                unigrams[fields[1]] = int(fields[2])
            else:
                pairs[(fields[1], fields[2])] = int(fields[3])
    return CooccurrenceIndex(
        window_size=window,
        unigram_counts=unigrams,
        pair_counts=pairs,
        total_windows=total,
    )


def npmi_pair(a: str, b: str, index: CooccurrenceIndex, epsilon: float | None = None) -> float:
    if epsilon is None:
        epsilon = index.default_epsilon()
    total = index.total_windows
    ca = index.unigram_counts.get(a, 0)
    cb = index.unigram_counts.get(b, 0)
    if ca == 0 or cb == 0:
        return -1.0  # the epsilon-smoothed minimum: never-seen words
    joint = index.pair_count(a, b)
    pj = joint / total if joint > 0 else epsilon
    if pj >= 1.0:
        return 1.0  # complete co-occurrence of two ubiquitous words
    value = math.log(pj / ((ca / total) * (cb / total))) / (-math.log(pj))
    assert -1.0 - 1e-12 <= value <= 1.0 + 1e-12, f"NPMI out of bounds: {value}"
    return value


def npmi(topic: Topic, index: CooccurrenceIndex, epsilon: float | None = None) -> float:
    """Mean pairwise NPMI over a topic's words (0.0 for a single-word topic)."""
    if not topic.words:
        raise ValueError("topic has no words")
    values = [
        npmi_pair(a, b, index, epsilon)
        for a, b in itertools.combinations(topic.words, 2)
    ]
    return float(np.mean(values)) if values else 0.0


@dataclass(frozen=True)
class NpmiReport:
    """Coherence aggregated over topics, then over seeds.

    ``per_topic`` aligns topics across seeds by cluster id (ids are
    0..k-1 in every fit); ``std_dev`` is the population deviation of the
    per-seed means.
    """

    per_topic: tuple[float, ...]
    per_seed_means: tuple[float, ...]
    mean: float
    std_dev: float
    seeds_aggregated: tuple[int, ...]

    def to_dict(self) -> dict:
        return {
            "per_topic": list(self.per_topic),
            "per_seed_means": list(self.per_seed_means),
            "mean": self.mean,
            "std_dev": self.std_dev,
            "seeds_aggregated": list(self.seeds_aggregated),
        }


def evaluate_topicset(
    ts: TopicSet, index: CooccurrenceIndex, epsilon: float | None = None
) -> list[float]:
    return [npmi(topic, index, epsilon) for topic in ts.topics]


def evaluate_run(
    topic_sets: Sequence[TopicSet],
    index: CooccurrenceIndex,
    epsilon: float | None = None,
) -> NpmiReport:
    """Score one topic set per seed and aggregate: per-seed mean over topics,
    then mean and population standard deviation across seeds."""
    if not topic_sets:
        raise ValueError("no topic sets to evaluate")
    head = topic_sets[0].provenance
    k = topic_sets[0].k
    for ts in topic_sets[1:]:
        if not head.matches_except_seed(ts.provenance):
            raise ProvenanceMismatch(
                f"{ts.provenance} does not match {head} (seed excepted)"
            )
        if ts.k != k:
            raise ProvenanceMismatch("topic sets disagree on k")
    by_topic = np.zeros(k)
    seed_means = []
    seeds = []
    for ts in topic_sets:
        values = {t.cluster_id: npmi(t, index, epsilon) for t in ts.topics}
        ordered = [values[j] for j in sorted(values)]
        by_topic += np.array(ordered)
        seed_means.append(float(np.mean(ordered)))
        seeds.append(ts.provenance.seed)
    by_topic /= len(topic_sets)
    return NpmiReport(
        per_topic=tuple(float(v) for v in by_topic),
        per_seed_means=tuple(seed_means),
        mean=float(np.mean(seed_means)),
        std_dev=float(np.std(seed_means)),
        seeds_aggregated=tuple(seeds),
    )
