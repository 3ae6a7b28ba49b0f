#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

Runs each hot kernel on a mid-sized instance through both backends and
prints a speedup table. Invoke from the repository root:

    python3 benchmarks/bench_kernels.py [--repeat 3]
"""

import argparse
import time

import numpy as np

from capwork import kernels
from capwork.gf import make_field
from capwork.graphs import collinear_triple_hypergraph, collinearity_graph, subspace_intersection_graph
from capwork.kernels import get_backend
from capwork.polar import parabolic_quadric
from capwork.projective import build_pg
from capwork.randomcaps import sample_points


def timed(fn, *args, repeat=3):
    best = None
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn(*args)
        dt = time.perf_counter() - t0
        best = dt if best is None else min(best, dt)
    return best, result


def build_cases():
    cases = []

    g = subspace_intersection_graph(build_pg(3, make_field(3)), 2)  # 130 vertices
    full = kernels.full_mask(g.n)
    cases.append(("induced_edge_count PG(3,3) lines", "induced_edge_count", (g.rows, full)))

    q43 = collinearity_graph(parabolic_quadric(2, make_field(3)))
    init = np.zeros(kernels.words_for(q43.n), dtype=np.uint64)
    cases.append(("mis_branch_bound Q(4,3)", "mis_branch_bound", (q43.rows, 10**7, 0, init)))

    w32 = collinearity_graph(parabolic_quadric(2, make_field(2)))
    cases.append(("min_edges_exact W-like n=15 s=6", "min_edges_exact", (w32.rows, 6)))

    h33 = collinear_triple_hypergraph(build_pg(3, make_field(3)))
    third = h33.third_masks()
    cases.append(("cap_branch_bound PG(3,3)", "cap_branch_bound", (third, 10**7)))
    cases.append(("count_caps_3u PG(3,3) m=8", "count_caps_3u", (third, 8)))

    pg = build_pg(3, make_field(13))
    sample = sample_points(pg, 0.05, 7, 0)
    spts = np.ascontiguousarray(pg.points[sample].astype(np.int32))
    g2l = np.full(pg.n_points, -1, dtype=np.int32)
    g2l[sample] = np.arange(len(sample), dtype=np.int32)
    add_t, mul_t, inv_t, _ = pg.field.tables()
    deg3 = np.zeros(len(sample), dtype=np.int64)
    cases.append(
        (
            f"pair_triple_stats PG(3,13) |S|={len(sample)}",
            "pair_triple_stats",
            (spts, 13, add_t, mul_t, inv_t, pg.enc_to_index, g2l, deg3),
        )
    )

    thr = np.uint64(int(0.3 * 2**64))
    cases.append(("sample_mask theta=30784", "sample_mask", (30784, thr, 1, 2)))
    return cases


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    nb = get_backend("numba")
    fallback = get_backend("numpy")
    print(f"{'kernel':45s} {'numba':>10s} {'numpy':>12s} {'speedup':>9s}")
    for label, name, fn_args in build_cases():
        fn_nb = getattr(nb, name)
        fn_np = getattr(fallback, name)
        # warm the JIT before timing
        fn_nb(*[a.copy() if isinstance(a, np.ndarray) else a for a in fn_args])
        t_nb, _ = timed(fn_nb, *fn_args, repeat=args.repeat)
        t_np, _ = timed(fn_np, *fn_args, repeat=max(1, args.repeat // 3))
        print(f"{label:45s} {t_nb*1e3:9.2f}ms {t_np*1e3:11.2f}ms {t_np/t_nb:8.1f}x")


if __name__ == "__main__":
    main()
