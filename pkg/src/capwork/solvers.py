"""Exact solvers: maximum independent sets, maximum caps, counting and
maximal-set listing; specialized fronts for ovoids, spreads and EKR sets.

Budgets are node-expansion counts, never wall time, so results are
reproducible. Exhausting a budget raises BudgetExceeded carrying the
incumbent rather than silently degrading to a heuristic.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import BudgetExceeded, GuardError
from .graphs import (
    DenseGraph,
    TripleHypergraph,
    collinearity_graph,
    oppositeness_graph,
    subspace_intersection_graph,
)

DEFAULT_BUDGET = 10**8
MIS_GUARD = 5000
CAP_GUARD = 2000
MAXIMAL_SET_GUARD = 10**6
COUNT_NODE_GUARD = 10**9


@dataclass
class SolveResult:
    alpha: int
    witness: tuple
    nodes: int
    elapsed: float
    status: str = "exact"
    witness_labels: list = field(default_factory=list)

    def to_json(self) -> dict:
        from . import SCHEMA_VERSION

        return {
            "schema_version": SCHEMA_VERSION,
            "kind": "solve-result",
            "alpha": self.alpha,
            "witness": list(self.witness),
            "nodes": self.nodes,
            "elapsed": self.elapsed,
            "status": self.status,
            "witness_labels": [list(x) if isinstance(x, (tuple, list)) else x for x in self.witness_labels],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "SolveResult":
        return cls(
            alpha=obj["alpha"],
            witness=tuple(obj["witness"]),
            nodes=obj["nodes"],
            elapsed=obj["elapsed"],
            status=obj["status"],
            witness_labels=obj.get("witness_labels", []),
        )


@dataclass
class CountResult:
    m: int
    count: int
    method: str = "exact-enumeration"

    def to_json(self) -> dict:
        from . import SCHEMA_VERSION

        return {
            "schema_version": SCHEMA_VERSION,
            "kind": "count-result",
            "m": self.m,
            "count": str(self.count),
            "method": self.method,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "CountResult":
        return cls(m=obj["m"], count=int(obj["count"]), method=obj["method"])


def greedy_independent_set(g: DenseGraph) -> list:
    """Min-degree greedy, ties to the lowest index; the B&B incumbent seed."""
    cand = set(range(g.n))
    adj = [set(g.neighbors(i)) for i in range(g.n)]
    chosen = []
    while cand:
        v = min(cand, key=lambda u: (len(adj[u] & cand), u))
        chosen.append(v)
        cand -= adj[v]
        cand.discard(v)
    return sorted(chosen)


def max_independent_set(g: DenseGraph, budget: int = DEFAULT_BUDGET) -> SolveResult:
    if g.n > MIS_GUARD:
        raise GuardError(f"n = {g.n} exceeds solver guard {MIS_GUARD}")
    t0 = time.monotonic()
    seed = greedy_independent_set(g)
    init_mask = kernels.to_mask(seed, g.n)
    best, witness, nodes, timed_out = kernels.mis_branch_bound(
        g.rows, int(budget), len(seed), init_mask
    )
    elapsed = time.monotonic() - t0
    wit = tuple(kernels.mask_indices(witness))
    result = SolveResult(int(best), wit, int(nodes), elapsed)
    if timed_out:
        result.status = "timeout"
        raise BudgetExceeded(f"budget {budget} exhausted", best=result, nodes=int(nodes))
    _check_witness_graph(g, wit)
    if g.labels is not None:
        result.witness_labels = [g.labels[v] for v in wit]
    return result


def _check_witness_graph(g: DenseGraph, wit):
    mask = kernels.to_mask(wit, g.n)
    assert g.induced_edge_count(mask) == 0, "witness is not independent"


def max_cap(h: TripleHypergraph, budget: int = DEFAULT_BUDGET) -> SolveResult:
    if h.n > CAP_GUARD:
        raise GuardError(f"theta = {h.n} exceeds cap solver guard {CAP_GUARD}")
    t0 = time.monotonic()
    third = h.third_masks()
    best, witness, nodes, timed_out = kernels.cap_branch_bound(third, int(budget))
    elapsed = time.monotonic() - t0
    wit = tuple(kernels.mask_indices(witness))
    result = SolveResult(int(best), wit, int(nodes), elapsed)
    if timed_out:
        result.status = "timeout"
        raise BudgetExceeded(f"budget {budget} exhausted", best=result, nodes=int(nodes))
    assert h.induced_edge_count(wit) == 0, "witness contains a collinear triple"
    assert result.alpha >= h.n - h.edge_count  # deletion bound
    return result


def count_independent_sets(obj, m: int, node_guard: int = COUNT_NODE_GUARD) -> CountResult:
    """Exact number of independent m-subsets of a graph or triple hypergraph.

    Uses the int64 kernel when C(n, m) fits comfortably, otherwise a big-int
    DFS (counts can exceed 64 bits).
    """
    if m < 0:
        raise GuardError("m must be nonnegative")
    if m == 0:
        return CountResult(0, 1)
    envelope = math.comb(obj.n, m)
    if isinstance(obj, DenseGraph):
        if envelope < 2**62:
            return CountResult(m, int(kernels.count_indep_graph(obj.rows, m)))
        return CountResult(m, _count_indep_bigint(obj, m, node_guard))
    third = obj.third_masks()
    if envelope < 2**62:
        return CountResult(m, int(kernels.count_caps_3u(third, m)))
    return CountResult(m, _count_caps_bigint(obj, third, m, node_guard))


def _count_indep_bigint(g: DenseGraph, m: int, node_guard: int) -> int:
    nbr = [0] * g.n
    for i in range(g.n):
        acc = 0
        for v in g.neighbors(i):
            acc |= 1 << v
        nbr[i] = acc
    full = (1 << g.n) - 1
    nodes = 0

    def rec(start, depth, allowed):
        nonlocal nodes
        nodes += 1
        if nodes > node_guard:
            raise GuardError("projected node count exceeded")
        if depth == m:
            return 1
        total = 0
        for v in range(start, g.n - (m - depth) + 1):
            if (allowed >> v) & 1:
                total += rec(v + 1, depth + 1, allowed & ~nbr[v])
        return total

    return rec(0, 0, full)


def _count_caps_bigint(h: TripleHypergraph, third, m: int, node_guard: int) -> int:
    n = h.n
    w = third.shape[2]
    third_int = [[0] * n for _ in range(n)]
    for a in range(n):
        for b in range(n):
            acc = 0
            for k in range(w):
                acc |= int(third[a, b, k]) << (64 * k)
            third_int[a][b] = acc
    full = (1 << n) - 1
    nodes = 0

    def rec(start, depth, allowed, chosen):
        nonlocal nodes
        nodes += 1
        if nodes > node_guard:
            raise GuardError("projected node count exceeded")
        if depth == m:
            return 1
        total = 0
        for v in range(start, n - (m - depth) + 1):
            if (allowed >> v) & 1:
                blocked = 0
                for u in chosen:
                    blocked |= third_int[u][v]
                chosen.append(v)
                total += rec(v + 1, depth + 1, allowed & ~blocked, chosen)
                chosen.pop()
        return total

    return rec(0, 0, full, [])


def list_maximal_independent_sets(g: DenseGraph, size_at_least: int = 1, limit: int = MAXIMAL_SET_GUARD):
    """All inclusion-maximal independent sets, sizes filtered afterwards.

    Bron-Kerbosch with pivoting over the complement graph; deterministic
    order (vertices ascending, pivot = max candidate coverage, lowest index
    on ties).
    """
    n = g.n
    # complement adjacency as python ints
    comp = []
    full = (1 << n) - 1
    for i in range(n):
        acc = 0
        for v in g.neighbors(i):
            acc |= 1 << v
        comp.append(~(acc | (1 << i)) & full)
    out = []

    def expand(r, p, x):
        if p == 0 and x == 0:
            out.append(r)
            if len(out) > limit:
                raise GuardError(f"more than {limit} maximal independent sets")
            return
        # pivot maximizing coverage of p
        best_u = -1
        best_cov = -1
        px = p | x
        m = px
        while m:
            low = m & -m
            u = low.bit_length() - 1
            m ^= low
            cov = bin(p & comp[u]).count("1")
            if cov > best_cov:
                best_cov = cov
                best_u = u
        ext = p & ~comp[best_u]
        while ext:
            low = ext & -ext
            v = low.bit_length() - 1
            ext ^= low
            expand(r | low, p & comp[v], x & comp[v])
            p &= ~low
            x |= low

    expand(0, full, 0)
    sets = []
    for r in out:
        members = []
        m = r
        while m:
            low = m & -m
            members.append(low.bit_length() - 1)
            m ^= low
        if len(members) >= size_at_least:
            sets.append(tuple(members))
    sets.sort()
    return sets


# -- geometry-facing fronts


def max_partial_ovoid(space, budget: int = DEFAULT_BUDGET) -> SolveResult:
    g = collinearity_graph(space)
    res = max_independent_set(g, budget)
    res.witness_labels = [tuple(int(c) for c in space.ambient.points[space.point_ids[v]]) for v in res.witness]
    return res


def max_partial_spread(pg, k: int, budget: int = DEFAULT_BUDGET) -> SolveResult:
    g = subspace_intersection_graph(pg, k)
    res = max_independent_set(g, budget)
    res.witness_labels = [g.labels[v] for v in res.witness]
    return res


def max_ekr_set(space, budget: int = DEFAULT_BUDGET) -> SolveResult:
    g = oppositeness_graph(space)
    res = max_independent_set(g, budget)
    res.witness_labels = [g.labels[v] for v in res.witness]
    return res
