# Dimensionality reduction before clustering, and the wall-clock scaling of
# the kernels: k-means grows linearly with the vocabulary, the full-covariance
# mixture much faster with the embedding dimension.

import tempfile
from pathlib import Path

from clustertopics import synth
from clustertopics.bench import bench_scaling
from clustertopics.clustering import fit_gmm
from clustertopics.corpus import build_vocabulary
from clustertopics.embeddings import load_embeddings, pca_reduce
from clustertopics.evaluation import build_index, evaluate_run
from clustertopics.topics import extract_top_j
from clustertopics.weighting import tf_weights

# ------------------------------------------------------------------
# 1) PCA sweep: project embeddings onto their top components and watch the
#    mixture's coherence; half the dimensions carry the structure.
corpus = synth.generate()
vocab = build_vocabulary(corpus.train_docs, min_df=5)
with tempfile.TemporaryDirectory() as td:
    path = Path(td) / "vectors.txt"
    synth.write_embedding_file(corpus, path)
    table, wvocab = load_embeddings(path, "glove_text", vocab, source_name="demo")
index = build_index(corpus.test_docs, window_size=10)
weights = tf_weights(wvocab)

print(f"native dimensionality: {table.dim}")
for dim in (None, 150, 100, 50):
    reduced = table if dim is None else pca_reduce(table, dim)
    sets = []
    for seed in (0, 1):
        model = fit_gmm(reduced, corpus.config.n_themes, weights=weights, seed=seed)
        sets.append(extract_top_j(model, reduced, wvocab, weight_scheme="tf"))
    label = "full" if dim is None else f"{dim:4d}"
    print(f"  dim {label}: mean NPMI {evaluate_run(sets, index).mean:+.3f}")

# ------------------------------------------------------------------
# 2) Scaling: pinned-iteration fits over synthetic blobs, medians of
#    repeated runs, single-threaded for interpretable ratios.
print("\nk-means, doubling the number of points (expect ~2x per step):")
for row in bench_scaling("n", [2000, 4000, 8000], algorithm="km",
                         repetitions=3, iterations=10, base={"m": 50, "k": 10}):
    print(f"  n={row['size']:5d}  median {row['median_seconds']*1e3:7.1f} ms")

print("\nmixture, doubling the dimension (expect much worse than 2x):")
for row in bench_scaling("m", [50, 100], algorithm="gmm",
                         repetitions=3, iterations=8, base={"n": 3000, "k": 5}):
    print(f"  m={row['size']:5d}  median {row['median_seconds']*1e3:7.1f} ms")
