"""Top-word extraction per cluster, frequency reranking, topic-set comparison.

A topic is the ranked head of one cluster: the J members closest to the
centroid (squared Euclidean for km/kd, cosine for sk) or, for the soft
mixture, the J vocabulary types of highest component density.  Reranking
re-sorts a window of proximity candidates by a corpus weighting scheme,
which trades semantic closeness for co-occurrence support.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .clustering import ClusterModel, gmm_component_log_density
from .corpus import Vocabulary
from .embeddings import EmbeddingTable
from .errors import MismatchedK
from .weighting import WeightVector


@dataclass(frozen=True)
class Provenance:
    embedding_source: str
    algorithm: str
    weight_scheme: str
    rerank_scheme: str
    seed: int

    def matches_except_seed(self, other: "Provenance") -> bool:
        return (
            self.embedding_source == other.embedding_source
            and self.algorithm == other.algorithm
            and self.weight_scheme == other.weight_scheme
            and self.rerank_scheme == other.rerank_scheme
        )


@dataclass(frozen=True)
class Topic:
    """One cluster's ranked words; scores follow the words, best first.

    Score semantics depend on provenance: squared distance (ascending) for
    km/kd, cosine similarity (descending) for sk, log density (descending)
    for gmm, and the rerank weight (descending) after reranking.
    """

    cluster_id: int
    words: tuple[str, ...]
    scores: tuple[float, ...]
    rerank_scheme: str = "none"


@dataclass(frozen=True)
class TopicSet:
    topics: tuple[Topic, ...]
    provenance: Provenance

    @property
    def k(self) -> int:
        return len(self.topics)


def extract_top_j(
    model: ClusterModel,
    table: EmbeddingTable,
    vocab: Vocabulary,
    n_words: int = 10,
    weight_scheme: str = "uniform",
) -> TopicSet:
    """Pick each cluster's top words by its own proximity criterion.

    Hard clusterings draw candidates from cluster members only; the
    mixture ranks the whole vocabulary by per-component density.  Clusters
    smaller than ``n_words`` yield all their members.  Ties break toward
    the lower vocabulary index.
    """
    if len(vocab) != len(table):
        raise ValueError("vocabulary and table are not aligned")
    X = table.vectors
    topics = []
    if model.kind == "gmm":
        log_dens = gmm_component_log_density(X, model.gmm_params)
        for j in range(model.k):
            order = np.argsort(-log_dens[:, j], kind="stable")[:n_words]
            topics.append(
                Topic(
                    cluster_id=j,
                    words=tuple(vocab.types[i] for i in order),
                    scores=tuple(float(log_dens[i, j]) for i in order),
                )
            )
    else:
        for j in range(model.k):
            members = np.flatnonzero(model.labels == j)
            diffs = X[members] - model.centroids[j]
            if model.kind == "sk":
                crit = -(X[members] @ model.centroids[j])  # ascending = best cosine
            else:
                crit = np.einsum("ij,ij->i", diffs, diffs)
            order = members[np.argsort(crit, kind="stable")[:n_words]]
            scores = []
            for i in order:
                if model.kind == "sk":
                    scores.append(float(X[i] @ model.centroids[j]))
                else:
                    d = X[i] - model.centroids[j]
                    scores.append(float(d @ d))
            topics.append(
                Topic(
                    cluster_id=j,
                    words=tuple(vocab.types[i] for i in order),
                    scores=tuple(scores),
                )
            )
    return TopicSet(
        topics=tuple(topics),
        provenance=Provenance(
            embedding_source=table.source_name,
            algorithm=model.kind,
            weight_scheme=weight_scheme,
            rerank_scheme="none",
            seed=model.seed,
        ),
    )


def rerank(
    topicset: TopicSet,
    model: ClusterModel,
    table: EmbeddingTable,
    vocab: Vocabulary,
    weights: WeightVector,
    window: int = 100,
    n_words: int = 10,
) -> TopicSet:
    """Re-sort each cluster's ``window`` nearest candidates by corpus weight.

    Ties keep the original proximity order, so reranking with window ==
    n_words permutes but never changes the word set.
    """
    if window < n_words:
        raise ValueError(f"window {window} must be at least n_words {n_words}")
    candidates = extract_top_j(
        model, table, vocab, n_words=window, weight_scheme=topicset.provenance.weight_scheme
    )
    index = vocab.index
    topics = []
    for topic in candidates.topics:
        by_weight = sorted(
            range(len(topic.words)),
            key=lambda i: (-weights.weights[index[topic.words[i]]], i),
        )[:n_words]
        topics.append(
            Topic(
                cluster_id=topic.cluster_id,
                words=tuple(topic.words[i] for i in by_weight),
                scores=tuple(float(weights.weights[index[topic.words[i]]]) for i in by_weight),
                rerank_scheme=weights.scheme,
            )
        )
    return TopicSet(
        topics=tuple(topics),
        provenance=replace(topicset.provenance, rerank_scheme=weights.scheme),
    )


def jaccard(topicset_a: TopicSet, topicset_b: TopicSet) -> tuple[list[float], float]:
    """Per-topic |A∩B| / |A∪B| over word sets (matched by cluster id) and its mean."""
    if topicset_a.k != topicset_b.k:
        raise MismatchedK(f"topic sets have k={topicset_a.k} and k={topicset_b.k}")
    b_by_id = {t.cluster_id: t for t in topicset_b.topics}
    per_topic = []
    for ta in topicset_a.topics:
        tb = b_by_id.get(ta.cluster_id)
        if tb is None:
            raise MismatchedK(f"cluster id {ta.cluster_id} missing from second set")
        a, b = set(ta.words), set(tb.words)
        union = a | b
        per_topic.append(len(a & b) / len(union) if union else 1.0)
    return per_topic, float(np.mean(per_topic))


def topicset_to_dict(ts: TopicSet) -> dict:
    return {
        "provenance": {
            "embedding_source": ts.provenance.embedding_source,
            "algorithm": ts.provenance.algorithm,
            "weight_scheme": ts.provenance.weight_scheme,
            "rerank_scheme": ts.provenance.rerank_scheme,
            "seed": ts.provenance.seed,
        },
        "topics": [
            {
                "cluster_id": t.cluster_id,
                "words": list(t.words),
                "scores": list(t.scores),
                "rerank_scheme": t.rerank_scheme,
            }
            for t in ts.topics
        ],
    }


def topicset_from_dict(doc: dict) -> TopicSet:
    return TopicSet(
        topics=tuple(
            Topic(
                cluster_id=t["cluster_id"],
                words=tuple(t["words"]),
                scores=tuple(t["scores"]),
                rerank_scheme=t["rerank_scheme"],
            )
            for t in doc["topics"]
        ),
        provenance=Provenance(**doc["provenance"]),
    )


def save_topics_json(ts: TopicSet, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(topicset_to_dict(ts), fh, sort_keys=True, indent=1, ensure_ascii=False)
        fh.write("\n")


def load_topics_json(path: str | Path) -> TopicSet:
    with open(path, encoding="utf-8") as fh:
        return topicset_from_dict(json.load(fh))


def save_topics_text(ts: TopicSet, path: str | Path) -> None:
    """One topic per line, space-separated words, for eyeballing and external tools."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for topic in ts.topics:
            fh.write(" ".join(topic.words) + "\n")
