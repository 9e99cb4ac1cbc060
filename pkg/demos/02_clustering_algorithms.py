# The four clustering kernels on the same data: hard k-means, spherical
# k-means on the unit sphere, the full-covariance Gaussian mixture, and
# k-medoids.  Shows weighted vs unweighted fits and the objective traces.

import numpy as np

from clustertopics.clustering import (
    fit_gmm,
    fit_kmeans,
    fit_kmedoids,
    fit_spherical_kmeans,
)
from clustertopics.synth import make_blobs

X = make_blobs(600, 30, k=4, seed=7)
U = X / np.linalg.norm(X, axis=1, keepdims=True)

# ------------------------------------------------------------------
# 1) Each fit is deterministic given (data, k, weights, seed) and records
#    its per-iteration objective.
for name, model in [
    ("k-means", fit_kmeans(X, 4, seed=0)),
    ("spherical", fit_spherical_kmeans(U, 4, seed=0)),
    ("mixture", fit_gmm(X, 4, seed=0)),
    ("k-medoids", fit_kmedoids(X, 4, seed=0)),
]:
    trace = model.inertia_trace
    print(f"{name:10s} iterations={model.iterations_run:3d} "
          f"objective {trace[0]:12.3f} -> {trace[-1]:12.3f}")

# ------------------------------------------------------------------
# 2) Weights act as point multiplicities.  A heavy point drags its
#    centroid; uniform weights reproduce the unweighted fit bit for bit.
points = np.array([[0.0], [1.0], [10.0]])
heavy = fit_kmeans(points, 2, weights=np.array([100.0, 1.0, 1.0]), seed=0)
plain = fit_kmeans(points, 2, seed=0)
print("\nunweighted centroids:", [float(c) for c in sorted(plain.centroids[:, 0])])
print("weighted centroids:  ", [float(c) for c in sorted(np.round(heavy.centroids[:, 0], 3))])

uniform = fit_kmeans(X, 4, weights=np.ones(len(X)), seed=3)
assert np.array_equal(uniform.centroids, fit_kmeans(X, 4, seed=3).centroids)
print("\nuniform-weight fit is bit-identical to the unweighted fit")

# ------------------------------------------------------------------
# 3) The mixture exposes full Gaussians: means, covariances, and a
#    row-stochastic responsibility matrix.
gmm = fit_gmm(X, 4, seed=1)
print("\nmixture weights:", np.round(gmm.gmm_params.mixture_weights, 3))
print("responsibility rows sum to one:",
      bool(np.allclose(gmm.responsibilities.sum(axis=1), 1.0)))
