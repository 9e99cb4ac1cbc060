"""Weighted centroid clustering kernels: k-means, spherical k-means, GMM, k-medoids.

All four fitters share the same conventions:

  * ``weights`` may be a WeightVector, a raw array, or None; weights act as
    point multiplicities in every update.  None is materialized as ones and
    runs through the identical code path, so uniform weighting is bit-for-bit
    the unweighted algorithm.
  * Initialization is k-means++ with sampling probability proportional to
    weight times squared distance; the GMM starts from a 10-iteration
    weighted k-means run on the same seed.
  * Assignment ties break toward the lowest cluster index, empty clusters
    are reseeded to the worst-fit point, and the per-iteration objective
    trace is asserted monotone, so a fit is a deterministic function of
    (data, k, weights, seed).

Results are reproducible for a fixed BLAS configuration; thread count may
perturb last-ulp sums as with any BLAS-backed code.
"""

from __future__ import annotations

import base64
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import scipy.linalg

from .embeddings import EmbeddingTable
from .errors import DegenerateInput, SingularCovariance
from .weighting import WeightVector

KINDS = ("km", "sk", "kd", "gmm")

DEFAULT_MAX_ITER = 300
DEFAULT_TOL = 1e-4  # relative centroid shift, km/sk/kd
GMM_DEFAULT_TOL = 1e-5  # relative log-likelihood change

_MONOTONE_SLACK = 1e-7
_GMM_MONOTONE_SLACK = 1e-6


@dataclass(frozen=True)
class GmmParams:
    means: np.ndarray  # (k, m)
    covariances: np.ndarray  # (k, m, m) symmetric positive-definite
    mixture_weights: np.ndarray  # (k,) simplex


@dataclass(frozen=True)
class ClusterModel:
    """A fitted clustering: centroids or Gaussian components plus assignments."""

    kind: str
    k: int
    seed: int
    centroids: np.ndarray  # (k, m); for gmm these are the component means
    labels: np.ndarray  # (n,) hard assignment (gmm: argmax responsibility)
    inertia_trace: tuple[float, ...]
    iterations_run: int
    gmm_params: GmmParams | None = None
    responsibilities: np.ndarray | None = None  # (n, k), gmm only
    medoid_indices: np.ndarray | None = None  # (k,), kd only

    @property
    def assignments(self) -> np.ndarray:
        """Hard labels for km/sk/kd, the responsibility matrix for gmm."""
        if self.kind == "gmm":
            return self.responsibilities
        return self.labels


def _as_matrix(table) -> np.ndarray:
    if isinstance(table, EmbeddingTable):
        return table.vectors
    return np.ascontiguousarray(np.asarray(table, dtype=np.float64))


def _as_weights(weights, n: int) -> np.ndarray:
    if weights is None:
        return np.ones(n)
    if isinstance(weights, WeightVector):
        weights = weights.weights
    w = np.asarray(weights, dtype=np.float64)
    if w.shape != (n,):
        raise ValueError(f"weights shape {w.shape} does not match {n} rows")
    if np.any(w < 0) or not np.any(w > 0):
        raise ValueError("weights must be nonnegative with at least one positive")
    return w


def _check_k(X: np.ndarray, k: int) -> None:
    # k vs distinct-row count is verified during seeding, where it is free.
    if k < 1:
        raise ValueError("k must be at least 1")
    if k > X.shape[0]:
        raise DegenerateInput(f"k={k} exceeds the number of rows {X.shape[0]}")


def _sq_dists(X: np.ndarray, C: np.ndarray, x_sq: np.ndarray) -> np.ndarray:
    # (n, k) squared Euclidean distances via the expansion; clipped at 0.
    c_sq = np.einsum("ij,ij->i", C, C)
    d = x_sq[:, None] - 2.0 * (X @ C.T) + c_sq[None, :]
    np.maximum(d, 0.0, out=d)
    return d


def _kmeans_pp_indices(
    X: np.ndarray, k: int, w: np.ndarray, rng: np.random.Generator, x_sq: np.ndarray
) -> np.ndarray:
    """k-means++ seeding; sampling probability proportional to w * D^2."""
    n = X.shape[0]
    chosen = np.empty(k, dtype=np.int64)
    chosen[0] = rng.choice(n, p=w / w.sum())
    d2 = _sq_dists(X, X[chosen[0]][None, :], x_sq)[:, 0]
    for j in range(1, k):
        mass = w * d2
        total = mass.sum()
        if total > 0:
            idx = rng.choice(n, p=mass / total)
        else:
            # every remaining weighted distance is zero (zero-weight outliers):
            # fall back to the distinct points ignoring weights
            candidates = np.flatnonzero(d2 > 0)
            if candidates.size == 0:
                raise DegenerateInput(
                    f"k={k} exceeds the number of distinct rows ({j} found)"
                )
            idx = candidates[rng.integers(candidates.size)]
        chosen[j] = idx
        np.minimum(d2, _sq_dists(X, X[idx][None, :], x_sq)[:, 0], out=d2)
    return chosen


def _reseed_empty(
    labels: np.ndarray, point_cost: np.ndarray, k: int, C: np.ndarray, X: np.ndarray
) -> None:
    """Give every empty cluster the currently worst-fit point (in place)."""
    counts = np.bincount(labels, minlength=k)
    cost = point_cost.copy()
    for empty in np.flatnonzero(counts == 0):
        donor = int(np.argmax(cost))
        labels[donor] = empty
        C[empty] = X[donor]
        cost[donor] = -np.inf
        point_cost[donor] = 0.0


def _assert_monotone(trace: list[float], slack: float, decreasing: bool) -> None:
    if len(trace) < 2:
        return
    prev, cur = trace[-2], trace[-1]
    tol = slack * max(1.0, abs(prev))
    if decreasing:
        assert cur <= prev + tol, f"objective rose: {prev} -> {cur}"
    else:
        assert cur >= prev - tol, f"objective fell: {prev} -> {cur}"


def _relative_shift(C_new: np.ndarray, C_old: np.ndarray) -> float:
    denom = max(float(np.linalg.norm(C_old)), np.finfo(np.float64).tiny)
    return float(np.linalg.norm(C_new - C_old)) / denom


def _weighted_centroids(
    X: np.ndarray, labels: np.ndarray, w: np.ndarray, k: int, C_old: np.ndarray
) -> np.ndarray:
    n, m = X.shape
    R = np.zeros((n, k))
    R[np.arange(n), labels] = w
    wsum = R.sum(axis=0)
    C = R.T @ X
    safe = wsum > 0
    C[safe] /= wsum[safe, None]
    if not np.all(safe):
        # a cluster of zero-weight members keeps the plain mean of its rows
        for j in np.flatnonzero(~safe):
            members = labels == j
            C[j] = X[members].mean(axis=0) if members.any() else C_old[j]
    return C


def fit_kmeans(
    table,
    k: int,
    weights=None,
    seed: int = 0,
    max_iter: int = DEFAULT_MAX_ITER,
    tol: float = DEFAULT_TOL,
) -> ClusterModel:
    """Lloyd iterations on the weighted objective sum_i w_i ||x_i - c_a(i)||^2."""
    X = _as_matrix(table)
    _check_k(X, k)
    w = _as_weights(weights, X.shape[0])
    rng = np.random.default_rng(seed)
    x_sq = np.einsum("ij,ij->i", X, X)
    C = X[_kmeans_pp_indices(X, k, w, rng, x_sq)].copy()

    trace: list[float] = []
    iterations = 0
    for _ in range(max_iter):
        iterations += 1
        d2 = _sq_dists(X, C, x_sq)
        labels = d2.argmin(axis=1)
        point_cost = w * d2[np.arange(X.shape[0]), labels]
        _reseed_empty(labels, point_cost, k, C, X)
        trace.append(float(point_cost.sum()))
        _assert_monotone(trace, _MONOTONE_SLACK, decreasing=True)
        C_new = _weighted_centroids(X, labels, w, k, C)
        shift = _relative_shift(C_new, C)
        C = C_new
        if shift < tol:
            break

    d2 = _sq_dists(X, C, x_sq)
    labels = d2.argmin(axis=1)
    point_cost = w * d2[np.arange(X.shape[0]), labels]
    _reseed_empty(labels, point_cost, k, C, X)
    trace.append(float(point_cost.sum()))
    _assert_monotone(trace, _MONOTONE_SLACK, decreasing=True)
    return ClusterModel(
        kind="km",
        k=k,
        seed=seed,
        centroids=C,
        labels=labels,
        inertia_trace=tuple(trace),
        iterations_run=iterations,
    )


def fit_spherical_kmeans(
    table,
    k: int,
    weights=None,
    seed: int = 0,
    max_iter: int = DEFAULT_MAX_ITER,
    tol: float = DEFAULT_TOL,
) -> ClusterModel:
    """Cosine-criterion k-means on unit vectors; centroids are renormalized means.

    The objective (weighted sum of cosine similarities to the assigned
    centroid) is monotone nondecreasing.  A cluster whose weighted mean
    vanishes is reseeded to the worst-fit point, like an empty cluster.
    """
    X = _as_matrix(table)
    norms = np.linalg.norm(X, axis=1)
    if np.any(np.abs(norms - 1.0) > 1e-6):
        raise ValueError("spherical k-means requires unit-norm rows; normalize first")
    _check_k(X, k)
    w = _as_weights(weights, X.shape[0])
    rng = np.random.default_rng(seed)
    x_sq = np.einsum("ij,ij->i", X, X)
    C = X[_kmeans_pp_indices(X, k, w, rng, x_sq)].copy()

    def assign(C):
        sims = X @ C.T
        labels = sims.argmax(axis=1)
        picked = sims[np.arange(X.shape[0]), labels]
        # worst fit = largest weighted cosine distance
        return labels, picked, w * (1.0 - picked)

    trace: list[float] = []
    iterations = 0
    for _ in range(max_iter):
        iterations += 1
        labels, picked, point_cost = assign(C)
        _reseed_empty(labels, point_cost, k, C, X)
        picked = (X * C[labels]).sum(axis=1)
        trace.append(float((w * picked).sum()))
        _assert_monotone(trace, _MONOTONE_SLACK, decreasing=False)
        S = _weighted_centroids(X, labels, w, k, C)
        lengths = np.linalg.norm(S, axis=1)
        dead = lengths == 0.0
        if np.any(dead):
            cost = w * (1.0 - picked)
            for j in np.flatnonzero(dead):
                donor = int(np.argmax(cost))
                S[j] = X[donor]
                lengths[j] = 1.0
                cost[donor] = -np.inf
        C_new = S / lengths[:, None]
        shift = _relative_shift(C_new, C)
        C = C_new
        if shift < tol:
            break

    labels, picked, point_cost = assign(C)
    _reseed_empty(labels, point_cost, k, C, X)
    picked = (X * C[labels]).sum(axis=1)
    trace.append(float((w * picked).sum()))
    _assert_monotone(trace, _MONOTONE_SLACK, decreasing=False)
    return ClusterModel(
        kind="sk",
        k=k,
        seed=seed,
        centroids=C,
        labels=labels,
        inertia_trace=tuple(trace),
        iterations_run=iterations,
    )


def gmm_component_log_density(X: np.ndarray, params: GmmParams) -> np.ndarray:
    """(n, k) log N(x | mu_k, Sigma_k) per component, via Cholesky in log space."""
    n, m = X.shape
    k = params.means.shape[0]
    out = np.empty((n, k))
    const = -0.5 * m * np.log(2.0 * np.pi)
    for j in range(k):
        try:
            L = np.linalg.cholesky(params.covariances[j])
        except np.linalg.LinAlgError:
            raise SingularCovariance(
                f"component {j}: covariance not positive definite even after "
                "regularization; increase reg"
            ) from None
        solved = scipy.linalg.solve_triangular(
            L, (X - params.means[j]).T, lower=True, check_finite=False
        )
        maha = np.einsum("ij,ij->j", solved, solved)
        log_det_half = float(np.sum(np.log(np.diag(L))))
        out[:, j] = const - log_det_half - 0.5 * maha
    return out


def _log_gaussians(X: np.ndarray, params: GmmParams) -> np.ndarray:
    """(n, k) log of pi_k * N(x | mu_k, Sigma_k)."""
    return gmm_component_log_density(X, params) + np.log(params.mixture_weights)[None, :]


def _logsumexp_rows(a: np.ndarray) -> np.ndarray:
    peak = a.max(axis=1, keepdims=True)
    return (peak + np.log(np.exp(a - peak).sum(axis=1, keepdims=True)))[:, 0]


def _gmm_mstep(
    X: np.ndarray, resp: np.ndarray, w: np.ndarray, reg: float, worst_idx: int | None
) -> GmmParams:
    wr = resp * w[:, None]
    mass = wr.sum(axis=0)
    total = w.sum()
    k, m = resp.shape[1], X.shape[1]
    means = np.empty((k, m))
    covs = np.empty((k, m, m))
    floor = total * 1e-12
    global_cov = None
    for j in range(k):
        if mass[j] <= floor:
            # component lost all its mass: reseed at the worst-fit point with a
            # global-covariance shape, keeping the component count at k
            means[j] = X[worst_idx] if worst_idx is not None else (w @ X) / total
            mass[j] = floor
            if global_cov is None:
                gdiff = X - (w @ X) / total
                global_cov = (gdiff * w[:, None]).T @ gdiff / total
            cov = global_cov
        else:
            means[j] = (wr[:, j] @ X) / mass[j]
            diff = X - means[j]
            cov = (diff * wr[:, j, None]).T @ diff / mass[j]
        covs[j] = 0.5 * (cov + cov.T)
        covs[j].flat[:: m + 1] += reg
    return GmmParams(means=means, covariances=covs, mixture_weights=mass / mass.sum())


def fit_gmm(
    table,
    k: int,
    weights=None,
    seed: int = 0,
    max_iter: int = DEFAULT_MAX_ITER,
    tol: float = GMM_DEFAULT_TOL,
    reg: float | None = None,
) -> ClusterModel:
    """Weighted EM for a full-covariance Gaussian mixture.

    Weights act as point multiplicities: every sufficient statistic
    accumulates w_i * r_ik, so duplicating a point and doubling its weight
    coincide.  ``reg`` (default 1e-6 times the mean feature variance) is
    added to covariance diagonals every M-step.
    """
    X = _as_matrix(table)
    _check_k(X, k)
    w = _as_weights(weights, X.shape[0])
    if reg is None:
        reg = max(1e-6 * float(X.var(axis=0).mean()), 1e-12)
    if reg <= 0:
        raise ValueError("reg must be positive")

    init = fit_kmeans(X, k, weights=w, seed=seed, max_iter=10)
    resp = np.zeros((X.shape[0], k))
    resp[np.arange(X.shape[0]), init.labels] = 1.0
    params = _gmm_mstep(X, resp, w, reg, worst_idx=None)

    trace: list[float] = []
    iterations = 0
    log_like = -np.inf
    for _ in range(max_iter):
        iterations += 1
        log_prob = _log_gaussians(X, params)
        log_norm = _logsumexp_rows(log_prob)
        resp = np.exp(log_prob - log_norm[:, None])
        new_log_like = float(w @ log_norm)
        trace.append(-new_log_like)
        _assert_monotone(trace, _GMM_MONOTONE_SLACK, decreasing=True)
        params = _gmm_mstep(X, resp, w, reg, worst_idx=int(np.argmin(log_norm)))
        change = abs(new_log_like - log_like) / max(abs(log_like), 1.0)
        log_like = new_log_like
        if change < tol:
            break

    log_prob = _log_gaussians(X, params)
    log_norm = _logsumexp_rows(log_prob)
    resp = np.exp(log_prob - log_norm[:, None])
    trace.append(-float(w @ log_norm))
    _assert_monotone(trace, _GMM_MONOTONE_SLACK, decreasing=True)
    return ClusterModel(
        kind="gmm",
        k=k,
        seed=seed,
        centroids=params.means,
        labels=resp.argmax(axis=1),
        inertia_trace=tuple(trace),
        iterations_run=iterations,
        gmm_params=params,
        responsibilities=resp,
    )


def fit_kmedoids(
    table,
    k: int,
    weights=None,
    seed: int = 0,
    max_iter: int = DEFAULT_MAX_ITER,
) -> ClusterModel:
    """Alternating k-medoids: nearest-medoid assignment, then each medoid moves
    to the member minimizing the weighted within-cluster distance sum.

    Distances are unsquared Euclidean (the classic PAM cost); medoids are
    always data rows.
    """
    X = _as_matrix(table)
    _check_k(X, k)
    w = _as_weights(weights, X.shape[0])
    rng = np.random.default_rng(seed)
    x_sq = np.einsum("ij,ij->i", X, X)
    medoids = _kmeans_pp_indices(X, k, w, rng, x_sq)

    trace: list[float] = []
    iterations = 0
    labels = None
    for _ in range(max_iter):
        iterations += 1
        dists = np.sqrt(_sq_dists(X, X[medoids], x_sq))
        labels = dists.argmin(axis=1)
        point_cost = w * dists[np.arange(X.shape[0]), labels]
        counts = np.bincount(labels, minlength=k)
        cost = point_cost.copy()
        for empty in np.flatnonzero(counts == 0):
            donor = int(np.argmax(cost))
            labels[donor] = empty
            medoids[empty] = donor
            cost[donor] = -np.inf
            point_cost[donor] = 0.0
        trace.append(float(point_cost.sum()))
        _assert_monotone(trace, _MONOTONE_SLACK, decreasing=True)

        new_medoids = medoids.copy()
        for j in range(k):
            members = np.flatnonzero(labels == j)
            inner = np.sqrt(_sq_dists(X[members], X[members], x_sq[members]))
            costs = inner @ w[members]
            new_medoids[j] = members[int(np.argmin(costs))]
        if np.array_equal(new_medoids, medoids):
            break
        medoids = new_medoids

    dists = np.sqrt(_sq_dists(X, X[medoids], x_sq))
    labels = dists.argmin(axis=1)
    trace.append(float((w * dists[np.arange(X.shape[0]), labels]).sum()))
    _assert_monotone(trace, _MONOTONE_SLACK, decreasing=True)
    return ClusterModel(
        kind="kd",
        k=k,
        seed=seed,
        centroids=X[medoids].copy(),
        labels=labels,
        inertia_trace=tuple(trace),
        iterations_run=iterations,
        medoid_indices=medoids.copy(),
    )


def _encode_array(a: np.ndarray) -> dict:
    a = np.ascontiguousarray(a)
    kind = "int64" if a.dtype.kind in "iu" else "float64"
    data = a.astype("<i8" if kind == "int64" else "<f8")
    return {
        "shape": list(a.shape),
        "kind": kind,
        "b64": base64.b64encode(data.tobytes()).decode("ascii"),
    }


def _decode_array(d: dict) -> np.ndarray:
    dtype = "<i8" if d["kind"] == "int64" else "<f8"
    return np.frombuffer(base64.b64decode(d["b64"]), dtype=dtype).reshape(d["shape"]).copy()


def save_model(model: ClusterModel, path: str | Path) -> None:
    """Serialize as versioned JSON; matrices are base64 of row-major
    little-endian 64-bit values."""
    doc = {
        "format": "clustertopics-model/1",
        "kind": model.kind,
        "k": model.k,
        "seed": model.seed,
        "iterations_run": model.iterations_run,
        "inertia_trace": list(model.inertia_trace),
        "centroids": _encode_array(model.centroids),
        "labels": _encode_array(model.labels),
        "gmm_params": None,
        "responsibilities": None,
        "medoid_indices": None,
    }
    if model.gmm_params is not None:
        doc["gmm_params"] = {
            "means": _encode_array(model.gmm_params.means),
            "covariances": _encode_array(model.gmm_params.covariances),
            "mixture_weights": _encode_array(model.gmm_params.mixture_weights),
        }
    if model.responsibilities is not None:
        doc["responsibilities"] = _encode_array(model.responsibilities)
    if model.medoid_indices is not None:
        doc["medoid_indices"] = _encode_array(model.medoid_indices)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(doc, fh, sort_keys=True, indent=1)
        fh.write("\n")


def load_model(path: str | Path) -> ClusterModel:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    if doc.get("format") != "clustertopics-model/1":
        raise ValueError(f"{path}: unknown model format {doc.get('format')!r}")
    gmm = None
    if doc["gmm_params"] is not None:
        gmm = GmmParams(
            means=_decode_array(doc["gmm_params"]["means"]),
            covariances=_decode_array(doc["gmm_params"]["covariances"]),
            mixture_weights=_decode_array(doc["gmm_params"]["mixture_weights"]),
        )
    resp = doc["responsibilities"]
    medoids = doc["medoid_indices"]
    return ClusterModel(
        kind=doc["kind"],
        k=doc["k"],
        seed=doc["seed"],
        centroids=_decode_array(doc["centroids"]),
        labels=_decode_array(doc["labels"]),
        inertia_trace=tuple(doc["inertia_trace"]),
        iterations_run=doc["iterations_run"],
        gmm_params=gmm,
        responsibilities=None if resp is None else _decode_array(resp),
        medoid_indices=None if medoids is None else _decode_array(medoids),
    )
