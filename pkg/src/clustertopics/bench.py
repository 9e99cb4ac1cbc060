"""Wall-clock scaling benchmarks for the clustering kernels.

Fits run with a pinned iteration count (convergence tolerance zero) so the
measurements isolate per-iteration cost: k-means should scale linearly in
the number of points, while the full-covariance mixture is superlinear in
the embedding dimension.  Benchmarks are single-threaded by default so the
ratios are interpretable; ``--parallel`` lifts the BLAS thread cap for
throughput reporting only.

Usage: ``python -m clustertopics.bench --axis n --sizes 5000,10000,20000``.
"""

from __future__ import annotations

import argparse
import contextlib
import time
from pathlib import Path
from statistics import median

from threadpoolctl import threadpool_limits

from .clustering import fit_gmm, fit_kmeans, fit_kmedoids, fit_spherical_kmeans
from .synth import make_blobs

AXES = ("n", "m", "k")

_DEFAULTS = {"n": 5000, "m": 100, "k": 20}


def _fit_pinned(algorithm: str, X, k: int, iterations: int, seed: int = 0):
    if algorithm == "km":
        return fit_kmeans(X, k, seed=seed, max_iter=iterations, tol=0.0)
    if algorithm == "sk":
        import numpy as np

        U = X / np.linalg.norm(X, axis=1, keepdims=True)
        return fit_spherical_kmeans(U, k, seed=seed, max_iter=iterations, tol=0.0)
    if algorithm == "gmm":
        return fit_gmm(X, k, seed=seed, max_iter=iterations, tol=0.0)
    if algorithm == "kd":
        # k-medoids stops at its fixed point; iterations only cap the run
        return fit_kmedoids(X, k, seed=seed, max_iter=iterations)
    raise ValueError(f"unknown algorithm {algorithm!r}")


def bench_scaling(
    axis: str,
    sizes: list[int],
    algorithm: str = "km",
    repetitions: int = 5,
    iterations: int = 20,
    base: dict | None = None,
    data_seed: int = 0,
    single_thread: bool = True,
) -> list[dict]:
    """Median wall time per cell over ``repetitions`` fits (after one warmup)."""
    if axis not in AXES:
        raise ValueError(f"axis must be one of {AXES}")
    dims = dict(_DEFAULTS)
    if base:
        dims.update(base)
    limits = threadpool_limits(limits=1) if single_thread else contextlib.nullcontext()
    rows = []
    with limits:
        for size in sizes:
            cell = dict(dims)
            cell[axis] = int(size)
            X = make_blobs(cell["n"], cell["m"], cell["k"], seed=data_seed)
            _fit_pinned(algorithm, X, cell["k"], iterations)  # warmup
            times = []
            for _ in range(repetitions):
                start = time.perf_counter()
                _fit_pinned(algorithm, X, cell["k"], iterations)
                times.append(time.perf_counter() - start)
            rows.append(
                {
                    "axis": axis,
                    "size": cell[axis],
                    "algorithm": algorithm,
                    "median_seconds": median(times),
                    "reps": repetitions,
                }
            )
    return rows


def write_csv(rows: list[dict], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("axis,size,algorithm,median_seconds,reps\n")
        for r in rows:
            fh.write(
                f"{r['axis']},{r['size']},{r['algorithm']},"
                f"{r['median_seconds']:.6f},{r['reps']}\n"
            )


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--axis", required=True, choices=list(AXES))
    parser.add_argument("--sizes", required=True, help="comma-separated sizes")
    parser.add_argument("--algorithm", default="km", choices=["km", "sk", "kd", "gmm"])
    parser.add_argument("--reps", type=int, default=5)
    parser.add_argument("--iterations", type=int, default=20)
    parser.add_argument("--n", type=int, default=_DEFAULTS["n"])
    parser.add_argument("--m", type=int, default=_DEFAULTS["m"])
    parser.add_argument("--k", type=int, default=_DEFAULTS["k"])
    parser.add_argument("--parallel", action="store_true",
                        help="lift the single-thread cap (throughput mode)")
    parser.add_argument("--out", help="CSV output path (default: stdout)")
    args = parser.parse_args(argv)
    rows = bench_scaling(
        args.axis,
        [int(s) for s in args.sizes.split(",")],
        algorithm=args.algorithm,
        repetitions=args.reps,
        iterations=args.iterations,
        base={"n": args.n, "m": args.m, "k": args.k},
        single_thread=not args.parallel,
    )
    if args.out:
        write_csv(rows, args.out)
    else:
        print("axis,size,algorithm,median_seconds,reps")
        for r in rows:
            print(f"{r['axis']},{r['size']},{r['algorithm']},{r['median_seconds']:.6f},{r['reps']}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
