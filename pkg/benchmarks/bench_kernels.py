"""Numba vs numpy timings for the partition-search kernels.

    python3 benchmarks/bench_kernels.py [--repeat 5]

The numba timings exclude the first (compiling) call.
"""
import argparse
import time

import numpy as np

from hybridbf import ULA, ClusterConfig, OfdmGrid, freq_response, generate_clustered
from hybridbf import _accel
from hybridbf.partitioner import _sorted_pairs
from hybridbf.spectral import sample_covariance


def covariance(n_tx, seed=0):
    tx, rx, grid = ULA(n_tx), ULA(2), OfdmGrid.desk(64)
    ch = freq_response(generate_clustered(ClusterConfig(), tx, rx, grid, seed), tx, rx, grid)
    return np.ascontiguousarray(np.abs(sample_covariance(ch).R))


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    backends = {"numpy": _accel.numpy_backend}
    if _accel.numba_backend is not None:
        backends["numba"] = _accel.numba_backend

    cases = []
    for n_tx, n_rf in [(16, 4), (64, 8), (144, 12)]:
        A = covariance(n_tx)
        pi, pj = _sorted_pairs(A)
        cases.append((f"greedy N_TX={n_tx} N_RF={n_rf}",
                      lambda b, A=A, pi=pi, pj=pj, k=n_rf: b.greedy_sweep(A, pi, pj, k)))
    for n_tx, n_rf in [(9, 3), (12, 3), (12, 4)]:
        A = covariance(n_tx)
        cases.append((f"exhaustive N_TX={n_tx} N_RF={n_rf}",
                      lambda b, A=A, k=n_rf: b.exhaustive_approx(A, k, A.shape[0])))

    print(f"{'kernel':<30}" + "".join(f"{name:>12}" for name in backends) + f"{'speedup':>10}")
    for label, fn in cases:
        row = {}
        for name, b in backends.items():
            fn(b)  # warm-up / compile
            row[name] = best_of(lambda: fn(b), args.repeat)
        speed = row["numpy"] / row["numba"] if "numba" in row else float("nan")
        print(f"{label:<30}" + "".join(f"{row[n] * 1e3:>10.2f}ms" for n in backends)
              + f"{speed:>9.1f}x")


if __name__ == "__main__":
    main()
