# NPMI topic coherence from first principles: boolean window counting on the
# held-out split, pairwise scores, and multi-seed aggregation.

from clustertopics.corpus import Document
from clustertopics.evaluation import build_index, npmi, npmi_pair
from clustertopics.topics import Provenance, Topic, TopicSet
from clustertopics.evaluation import evaluate_run


def doc(i, text):
    return Document(id=str(i), tokens=tuple(text.split()), split="test")

docs = [
    doc(0, "storm rain wind coast"),
    doc(1, "rain wind umbrella"),
    doc(2, "storm calm harbor"),
    doc(3, "calm sun harbor beach"),
    doc(4, "storm rain coast"),
]

# ------------------------------------------------------------------
# 1) Counting is boolean per window: each distinct word once, each distinct
#    pair once.  Short documents form a single window.
index = build_index(docs, window_size=10)
print("windows:", index.total_windows)
print("count(storm) =", index.unigram_counts["storm"],
      " count(storm,rain) =", index.pair_count("storm", "rain"))

# ------------------------------------------------------------------
# 2) Pair scores live in [-1, 1]: positive for words seen together more
#    than chance, -1 for words never seen at all.
for a, b in [("storm", "rain"), ("storm", "sun"), ("storm", "ghost")]:
    print(f"npmi({a:5s},{b:5s}) = {npmi_pair(a, b, index):+.3f}")

# A topic scores the mean over its word pairs.
topic = Topic(cluster_id=0, words=("storm", "rain", "wind"), scores=(0, 0, 0))
print("topic npmi:", round(npmi(topic, index), 4))

# ------------------------------------------------------------------
# 3) Runs aggregate one topic set per seed: mean over topics per seed, then
#    mean and population deviation across seeds.
def topicset(seed, *word_lists):
    return TopicSet(
        topics=tuple(
            Topic(cluster_id=i, words=tuple(ws), scores=tuple([0.0] * len(ws)))
            for i, ws in enumerate(word_lists)
        ),
        provenance=Provenance("demo", "km", "tf", "none", seed),
    )

report = evaluate_run(
    [
        topicset(0, ["storm", "rain", "wind"], ["calm", "sun", "harbor"]),
        topicset(1, ["storm", "rain", "coast"], ["calm", "harbor", "beach"]),
    ],
    index,
)
print(f"\nmean {report.mean:+.4f}  std {report.std_dev:.4f} "
      f"over seeds {report.seeds_aggregated}")
