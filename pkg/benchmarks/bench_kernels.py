#!/usr/bin/env python3
"""Benchmark the numba kernels against their pure-numpy fallbacks.

Usage: python benchmarks/bench_kernels.py [--repeat 5]

Numba compilation happens on the first call of each kernel and is excluded
from the timings (one warmup call per kernel).
"""

import argparse
import time

import numpy as np


def time_call(fn, *args, repeat=5):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def bench_mh(repeat):
    from exnet.bmlr.model import ModelData
    from exnet.bmlr.sampler import _initial_state
    from exnet.kernels import mh
    from exnet.numerics import softplus
    from exnet.synth import SynthSpec, generate_synthetic

    ds = generate_synthetic(SynthSpec(seed=0)).dataset()  # pharma-sized: ~1.9k edges
    md = ModelData.from_dataset(ds)
    block = md.n_edges + md.n_refs + 3

    def run(sweep):
        rng = np.random.default_rng(1)
        u, tau, scalars = _initial_state(md)
        sp_u = softplus(u)
        scale_u = np.full(md.n_edges, 0.5)
        scale_tau = np.full(md.n_refs, 0.3)
        scale_s = np.array([0.1, 0.4, 0.5])
        acc_u = np.zeros(md.n_edges, dtype=np.int64)
        acc_tau = np.zeros(md.n_refs, dtype=np.int64)
        acc_s = np.zeros(3, dtype=np.int64)
        for _ in range(1000):
            z = rng.standard_normal(block)
            lu = np.log(rng.random(block))
            sweep(u, sp_u, tau, scalars, md.y, md.n, md.ref_of_edge, md.edge_start,
                  md.edge_count, z, lu, scale_u, scale_tau, scale_s,
                  acc_u, acc_tau, acc_s)

    results = {"numpy": time_call(run, mh.mh_sweep_numpy, repeat=repeat)}
    if hasattr(mh, "mh_sweep_numba"):
        run(mh.mh_sweep_numba)  # warmup/compile
        results["numba"] = time_call(run, mh.mh_sweep_numba, repeat=repeat)
    return f"MH sweep x1000 ({md.n_edges} edges, {md.n_refs} refs)", results


def bench_brandes(repeat):
    from exnet.kernels import brandes

    rng = np.random.default_rng(2)
    n = 600
    adj = [[] for _ in range(n)]
    for i in range(n):
        for j in rng.choice(n, size=8, replace=False):
            j = int(j)
            if j != i and j not in adj[i]:
                adj[i].append(j)
                adj[j].append(i)
    indptr = np.zeros(n + 1, dtype=np.int64)
    for i in range(n):
        adj[i].sort()
        indptr[i + 1] = indptr[i] + len(adj[i])
    indices = np.array([w for nbrs in adj for w in nbrs], dtype=np.int64)

    results = {"numpy": time_call(brandes.betweenness_numpy, indptr, indices, repeat=repeat)}
    if hasattr(brandes, "betweenness_numba"):
        brandes.betweenness_numba(indptr, indices)  # warmup/compile
        results["numba"] = time_call(brandes.betweenness_numba, indptr, indices,
                                     repeat=repeat)
    return f"betweenness ({n} nodes, ~{indices.size // 2} edges)", results


def bench_fa2(repeat):
    from exnet.kernels import fa2

    rng = np.random.default_rng(3)
    n = 800
    pos0 = rng.normal(0, 100, size=(n, 2))
    mass = rng.integers(1, 10, size=n).astype(np.float64)
    m = 3 * n
    edge_a = rng.integers(0, n, size=m).astype(np.int64)
    edge_b = (edge_a + 1 + rng.integers(0, n - 1, size=m)) % n

    def run(step):
        pos = pos0.copy()
        prev = np.zeros_like(pos)
        speed, se = 1.0, 1.0
        for _ in range(50):
            speed, se = step(pos, prev, mass, edge_a, edge_b, 2.0, 1.0, 1.0, speed, se)

    results = {"numpy": time_call(run, fa2.fa2_iteration_numpy, repeat=repeat)}
    if hasattr(fa2, "fa2_iteration_numba"):
        run(fa2.fa2_iteration_numba)  # warmup/compile
        results["numba"] = time_call(run, fa2.fa2_iteration_numba, repeat=repeat)
    return f"ForceAtlas2 x50 iterations ({n} nodes, {m} edges)", results


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    from exnet.kernels import BACKEND

    print(f"active backend: {BACKEND}\n")
    rows = []
    for bench in (bench_mh, bench_brandes, bench_fa2):
        label, results = bench(args.repeat)
        rows.append((label, results))

    width = max(len(label) for label, _ in rows)
    print(f"{'benchmark':<{width}}  {'numpy':>10}  {'numba':>10}  {'speedup':>8}")
    for label, results in rows:
        np_t = results["numpy"]
        if "numba" in results:
            nb_t = results["numba"]
            print(f"{label:<{width}}  {np_t:>9.3f}s  {nb_t:>9.3f}s  {np_t / nb_t:>7.1f}x")
        else:
            print(f"{label:<{width}}  {np_t:>9.3f}s  {'n/a':>10}  {'n/a':>8}")


if __name__ == "__main__":
    main()
