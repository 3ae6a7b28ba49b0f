"""Constructive container families with verifiers, plus the arithmetic
certificate checkers that the counting theorems reduce to.

Graph containers follow the classical max-degree fingerprint scheme: walk
the candidate graph, repeatedly examine its highest-degree vertex, keep it
(and delete its neighborhood) when it belongs to the independent set being
routed, discard it otherwise. The hypergraph analogue peels the
highest-triple-degree vertex until the induced edge count reaches the
target. Both runs are pure functions of (structure, fingerprint), so
families deduplicate by fingerprint.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import kernels
from .errors import (
    DomainError,
    EpsilonRangeError,
    GammaRangeError,
    GuardError,
    PreconditionSizeError,
)
from .graphs import DenseGraph, TripleHypergraph
from .projective import gaussian_binomial

GRAPH_CONTAINER_GUARD = 5000


@dataclass(frozen=True)
class ConstantsTable:
    """Certificate constants; defaults are the published values."""

    c_st: int = 62208
    ratio: Fraction = Fraction(12, 11)
    codegree_cap: Fraction = Fraction(1, 288)
    tau_c1: int = 576
    tau_c2_base: int = 18
    c1_exponent_guard: int = 32

    def to_json(self) -> dict:
        return {
            "c_st": self.c_st,
            "ratio": str(self.ratio),
            "codegree_cap": str(self.codegree_cap),
            "tau_c1": self.tau_c1,
            "tau_c2_base": self.tau_c2_base,
            "c1_exponent_guard": self.c1_exponent_guard,
        }


DEFAULT_CONSTANTS = ConstantsTable()


@dataclass
class ContainerParams:
    epsilon: Fraction
    beta: Fraction
    R: Fraction
    f: float
    alpha: Fraction
    constants: ConstantsTable = field(default_factory=ConstantsTable)

    def fingerprint_cap(self) -> int:
        return math.ceil(self.f)

    def to_json(self) -> dict:
        return {
            "epsilon": str(self.epsilon),
            "beta": str(self.beta),
            "R": str(self.R),
            "f": self.f,
            "alpha": str(self.alpha),
            "constants": self.constants.to_json(),
        }


def graph_container_params(
    n: int, d: int, lam, epsilon, constants: ConstantsTable = DEFAULT_CONSTANTS
) -> ContainerParams:
    """R = (1+eps) alpha, beta = (eps/(1+eps))(d-lam)/n and the fingerprint
    budget f = (1 + 1/eps) (n/(d-lam)) ln((1/(1+eps)) (d-lam)/(-lam)).

    Construction checks beta < 1 and e^(-beta f) n <= R.
    """
    lam = Fraction(lam)
    epsilon = Fraction(epsilon)
    if lam >= 0 or d <= 0:
        raise EpsilonRangeError("need lambda < 0 < d")
    if not 0 < epsilon <= Fraction(n, d):
        raise EpsilonRangeError(f"epsilon must lie in (0, n/d], got {epsilon}")
    alpha = Fraction(-lam * n, 1) / (d - lam)
    R = (1 + epsilon) * alpha
    beta = (epsilon / (1 + epsilon)) * Fraction(d - lam, n)
    ratio = Fraction(1, 1 + epsilon) * Fraction(d - lam, 1) / (-lam)
    f = float((1 + 1 / epsilon) * Fraction(n, d - lam)) * math.log(float(ratio))
    assert beta < 1, "beta must stay below 1"
    assert math.exp(-float(beta) * f) * n <= float(R) * (1 + 1e-12), "e^(-beta f) n <= R violated"
    return ContainerParams(epsilon=epsilon, beta=beta, R=R, f=f, alpha=alpha, constants=constants)


@dataclass
class ContainerFamily:
    entries: dict  # sorted fingerprint tuple -> sorted container tuple
    meta: dict = field(default_factory=dict)

    @property
    def stats(self) -> dict:
        sizes_f = [len(f) for f in self.entries] or [0]
        sizes_c = [len(c) for c in self.entries.values()] or [0]
        return {
            "family_size": len(self.entries),
            "max_fingerprint": max(sizes_f),
            "max_container": max(sizes_c),
            "max_container_edges": self.meta.get("max_container_edges"),
        }

    def to_jsonl(self) -> str:
        lines = []
        for fp in sorted(self.entries):
            cont = self.entries[fp]
            rec = {
                "fingerprint": list(fp),
                "container": list(cont),
                "edges": self.meta.get("edges", {}).get(fp),
            }
            lines.append(json.dumps(rec, separators=(",", ":"), sort_keys=True))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_jsonl(cls, text: str) -> "ContainerFamily":
        entries = {}
        edges = {}
        for line in text.splitlines():
            if not line.strip():
                continue
            rec = json.loads(line)
            fp = tuple(rec["fingerprint"])
            entries[fp] = tuple(rec["container"])
            if rec.get("edges") is not None:
                edges[fp] = rec["edges"]
        return cls(entries=entries, meta={"edges": edges})


def _route_graph(g: DenseGraph, member, R: Fraction, f_cap: int):
    """One fingerprint walk; member(v) answers 'is v in the routed set'."""
    cand = kernels.full_mask(g.n)
    fingerprint = []
    csize = g.n
    while csize > R and len(fingerprint) < f_cap:
        degs = kernels.degrees_in_mask(g.rows, cand)
        best_v = -1
        best_d = -1
        for v in range(g.n):
            if kernels.mask_contains(cand, v) and degs[v] > best_d:
                best_d = int(degs[v])
                best_v = v
        if member(best_v):
            fingerprint.append(best_v)
            cand = cand & ~g.rows[best_v]
        cand[best_v >> 6] &= ~(np.uint64(1) << np.uint64(best_v & 63))
        csize = kernels.popcount_words(cand)
    container = sorted(set(fingerprint) | set(kernels.mask_indices(cand)))
    return tuple(sorted(fingerprint)), tuple(container)


def build_graph_containers(
    g: DenseGraph, params: ContainerParams, independents
) -> ContainerFamily:
    """Container family covering the supplied independent sets."""
    if g.n > GRAPH_CONTAINER_GUARD:
        raise GuardError(f"n = {g.n} exceeds container guard {GRAPH_CONTAINER_GUARD}")
    f_cap = params.fingerprint_cap()
    entries = {}
    edges = {}
    for ind in independents:
        members = set(ind)
        fp, cont = _route_graph(g, members.__contains__, params.R, f_cap)
        if fp not in entries:
            entries[fp] = cont
            edges[fp] = g.induced_edge_count(cont)
    meta = {
        "kind": "graph",
        "R": str(params.R),
        "f": params.f,
        "edges": edges,
        "max_container_edges": max(edges.values(), default=0),
    }
    return ContainerFamily(entries=entries, meta=meta)


def verify_graph_containers(
    fam: ContainerFamily,
    g: DenseGraph,
    params: ContainerParams,
    independents,
    trials: int = 10**4,
    seed: int = 0,
) -> dict:
    """Coverage, size and sampled-supersaturation checks (report only)."""
    independents = list(independents)
    f_cap = params.fingerprint_cap()
    coverage_ok = True
    uncovered = []
    for ind in independents:
        if len(ind) < params.f:
            continue
        members = set(ind)
        fp, _ = _route_graph(g, members.__contains__, params.R, f_cap)
        cont = fam.entries.get(fp)
        if cont is None or not members <= set(cont):
            coverage_ok = False
            uncovered.append(tuple(sorted(ind)))
    size_cap = float(params.R) + params.f
    size_ok = all(len(c) <= size_cap for c in fam.entries.values())
    supersat_ok = True
    r_floor = math.ceil(params.R)
    worst = None
    for t in range(trials):
        span = g.n - r_floor
        s = r_floor + (kernels.mix64(seed * 0x9E3779B9 + t) % (span + 1) if span > 0 else 0)
        subset = kernels.sample_subset(g.n, s, seed, t)
        lhs = 2 * g.induced_edge_count(subset)
        rhs = params.beta * s * s
        if Fraction(lhs) < rhs:
            supersat_ok = False
            worst = (s, lhs, float(rhs))
    return {
        "coverage_ok": coverage_ok,
        "uncovered": uncovered[:5],
        "size_ok": size_ok,
        "size_cap": size_cap,
        "supersat_ok": supersat_ok,
        "supersat_violation": worst,
        "checked_independents": len(independents),
        "trials": trials,
    }


# -- certificate arithmetic for the 3-uniform container machinery


def tau_for_subset(u, m, q: int, constants: ConstantsTable = DEFAULT_CONSTANTS) -> float:
    """Branching rate tau(U) = max(c1 q u / m, c2 sqrt(u / m)).

    c1 = 576 and c2 = 18 make the codegree ratio at most
    1/576 + 1/648 < 1/288 whenever Delta_2 <= q.
    """
    if u <= 0 or m <= 0:
        raise PreconditionSizeError("need u, m > 0")
    u = float(u)
    m = float(m)
    return max(constants.tau_c1 * q * u / m, constants.tau_c2_base * math.sqrt(u / m))


def codegree_lhs(delta2, avg_deg, tau) -> float:
    """Delta_2/(d tau) + 1/(2 d tau^2), compared against 1/288 by callers."""
    avg_deg = float(avg_deg)
    tau = float(tau)
    if avg_deg <= 0 or tau <= 0:
        raise PreconditionSizeError("need positive average degree and tau")
    return float(delta2) / (avg_deg * tau) + 1.0 / (2.0 * avg_deg * tau * tau)


def hypergraph_aggregates(r: int, q: int) -> dict:
    """Closed-form (vertices, edges, Delta_2, average degree) of the
    collinear-triple hypergraph on PG(r, q); no geometry is built."""
    theta = gaussian_binomial(r + 1, 1, q)
    edges = theta * (theta - 1) * (q - 1) // 6
    return {
        "vertices": theta,
        "edges": edges,
        "delta2": q - 1,
        "avg_degree": Fraction(3 * edges, theta),
    }


def full_certificate(r: int, q: int, constants: ConstantsTable = DEFAULT_CONSTANTS) -> dict:
    """tau(V) < 1/2 and codegree ratio <= 1/288 from closed-form aggregates."""
    agg = hypergraph_aggregates(r, q)
    tau = tau_for_subset(agg["vertices"], agg["edges"], q, constants)
    lhs = codegree_lhs(agg["delta2"], agg["avg_degree"], tau)
    cap = float(constants.codegree_cap)
    return {
        "r": r,
        "q": q,
        "vertices": agg["vertices"],
        "edges": agg["edges"],
        "delta2": agg["delta2"],
        "tau": tau,
        "tau_ok": tau < 0.5,
        "codegree_lhs": lhs,
        "codegree_ok": lhs <= cap,
        "ok": tau < 0.5 and lhs <= cap,
    }


def container_bookkeeping(
    e_total: int, e0, r: int, q: int, constants: ConstantsTable = DEFAULT_CONSTANTS
) -> dict:
    """Iteration count s = ln(e/e0)/ln(12/11), the f((12/11)^i e0) schedule
    and the fingerprint/count envelopes, all as reals for reporting.

    The per-step envelope uses u_max(m) = (15 [r]_q m)^(1/3) and
    tau_env(m) = c2 sqrt(u_max/m) with c2 = tau_c2_base * c1_exponent_guard.
    """
    if not 0 < e0 <= e_total:
        raise PreconditionSizeError("need 0 < e0 <= e(H)")
    lines_per_point = gaussian_binomial(r, 1, q)
    s = math.log(e_total / float(e0)) / math.log(float(constants.ratio))
    c2 = constants.tau_c2_base * constants.c1_exponent_guard

    def u_max(m):
        return (15.0 * lines_per_point * m) ** (1.0 / 3.0)

    def tau_env(m):
        return c2 * math.sqrt(u_max(m) / m)

    def f_env(m):
        tau = tau_env(m)
        if tau >= 1.0:
            return float("nan")
        return u_max(m) * tau * math.log(1.0 / tau)

    schedule = []
    i = 0
    m = float(e0)
    while i < s:
        schedule.append(f_env(m))
        m *= float(constants.ratio)
        i += 1
    finite = [x for x in schedule if not math.isnan(x)]
    schedule_sum = sum(finite) if finite else 0.0
    tau_star = tau_env(float(e0))
    n_vertices = gaussian_binomial(r + 1, 1, q)
    return {
        "s": s,
        "schedule": schedule,
        "schedule_sum": schedule_sum,
        "tau_star": tau_star,
        "fingerprint_cap": constants.c_st * (s + 1) * tau_star * n_vertices,
        "count_cap": constants.c_st * schedule_sum,
    }


# -- hypergraph containers: degree peel


class _PeelState:
    """Incremental line-occupancy bookkeeping for the peel."""

    def __init__(self, h: TripleHypergraph):
        if not h.materialized:
            raise GuardError("peel requires a materialized hypergraph")
        self.h = h
        self.line_pts = h.line_points
        self.width = self.line_pts.shape[1]
        self.occ = np.full(len(self.line_pts), self.width, dtype=np.int64)
        occ = self.occ
        self.edge_count = int((occ * (occ - 1) * (occ - 2) // 6).sum())
        # point -> incident line ids
        self.point_lines = h.geometry.point_lines

    def degree(self, v: int) -> int:
        occ = self.occ[self.point_lines[v]]
        occ = occ[occ >= 3]
        return int(((occ - 1) * (occ - 2) // 2).sum())

    def degrees_all(self) -> np.ndarray:
        """Triple degree of every point against the current occupancy."""
        w = (self.occ - 1) * (self.occ - 2) // 2
        w[self.occ < 3] = 0
        deg = np.zeros(self.h.n, dtype=np.int64)
        np.add.at(deg, self.line_pts.ravel(), np.repeat(w, self.width))
        return deg

    def remove(self, v: int):
        self.edge_count -= self.degree(v)
        self.occ[self.point_lines[v]] -= 1


def _route_triple(h: TripleHypergraph, member, e_target) -> tuple:
    """Peel max-triple-degree vertices until e(H[C]) <= e_target."""
    st = _PeelState(h)
    fingerprint = []
    active = np.ones(h.n, dtype=bool)
    while st.edge_count > e_target:
        deg = st.degrees_all()
        deg[~active] = -1
        best_v = int(np.argmax(deg))  # np.argmax keeps the lowest index on ties
        assert active[best_v]
        active[best_v] = False
        if member(best_v):
            fingerprint.append(best_v)
            # fingerprint vertices stay in the container but are no longer
            # removable; their triples still count toward e(H[C])
        else:
            st.remove(best_v)
    container = tuple(sorted(set(fingerprint) | set(np.flatnonzero(active).tolist())))
    return tuple(sorted(fingerprint)), container, st


def build_triple_containers(h: TripleHypergraph, independents, e0) -> ContainerFamily:
    """Peel-based container family for a 3-uniform hypergraph.

    Every produced container satisfies e(H[C]) <= e0 by the stopping rule
    (fingerprint triples included).
    """
    entries = {}
    edges = {}
    for ind in independents:
        members = set(ind)
        fp, cont, _ = _route_triple(h, members.__contains__, e0)
        if fp not in entries:
            entries[fp] = cont
            edges[fp] = h.induced_edge_count(cont)
    meta = {
        "kind": "triple",
        "e0": int(e0) if float(e0).is_integer() else float(e0),
        "edges": edges,
        "max_container_edges": max(edges.values(), default=0),
    }
    return ContainerFamily(entries=entries, meta=meta)


def verify_triple_containers(fam: ContainerFamily, h: TripleHypergraph, independents, e0) -> dict:
    coverage_ok = True
    uncovered = []
    for ind in independents:
        members = set(ind)
        fp, _, _ = _route_triple(h, members.__contains__, e0)
        cont = fam.entries.get(fp)
        if cont is None or not members <= set(cont):
            coverage_ok = False
            uncovered.append(tuple(sorted(ind)))
    edge_ok = all(h.induced_edge_count(c) <= e0 for c in fam.entries.values())
    return {
        "coverage_ok": coverage_ok,
        "uncovered": uncovered[:5],
        "edge_ok": edge_ok,
        "max_container": fam.stats["max_container"],
    }


def gamma_refinement(h: TripleHypergraph, fam: ContainerFamily, gamma, independents) -> ContainerFamily:
    """Shrink containers to near-cap size: peel each routed set further until
    e(H[C]) <= (1+gamma)^2 gamma / 12 * [3]_q^2, then assert the size bound
    |C| <= (1+gamma) [3]_q on every output container.
    """
    gamma = Fraction(gamma)
    if not 0 < gamma <= Fraction(1, 10):
        raise GammaRangeError(f"gamma must lie in (0, 1/10], got {gamma}")
    if h.r != 3:
        raise GammaRangeError("refinement is stated for PG(3, q)")
    lines_per_point = gaussian_binomial(3, 1, h.q)
    target = (1 + gamma) ** 2 * gamma / 12 * lines_per_point**2
    size_cap = math.floor((1 + gamma) * lines_per_point)
    e0 = fam.meta.get("e0")
    entries = {}
    edges = {}
    for ind in independents:
        members = set(ind)
        if e0 is not None:
            fp0, cont0, _ = _route_triple(h, members.__contains__, e0)
            if fp0 not in fam.entries or not members <= set(fam.entries[fp0]):
                raise GuardError("input family does not cover a supplied independent set")
        fp, cont, _ = _route_triple(h, members.__contains__, target)
        if fp not in entries:
            if len(cont) > size_cap:
                raise AssertionError(
                    f"refined container has {len(cont)} vertices, cap is {size_cap}"
                )
            entries[fp] = cont
            edges[fp] = h.induced_edge_count(cont)
    meta = {
        "kind": "triple-refined",
        "gamma": str(gamma),
        "target": float(target),
        "size_cap": size_cap,
        "edges": edges,
        "max_container_edges": max(edges.values(), default=0),
    }
    return ContainerFamily(entries=entries, meta=meta)


def edge_to_size_check(h: TripleHypergraph, container, ks=(2, 4)) -> bool:
    """e(H[C]) <= (k^2(k-1)/6)[r]^2 - (k(k-1)/3)[r]  =>  |C| <= k [r]."""
    lines_per_point = gaussian_binomial(h.r, 1, h.q)
    e = h.induced_edge_count(container)
    for k in ks:
        bound = Fraction(k * k * (k - 1), 6) * lines_per_point**2 - Fraction(
            k * (k - 1), 3
        ) * lines_per_point
        if Fraction(e) <= bound and len(container) > k * lines_per_point:
            return False
    return True


# -- binomial comparisons


def log_binomial(x, m: int) -> float:
    """ln C(x, m) for real x >= m >= 0, via log-gamma."""
    if m < 0 or x < m:
        raise DomainError(f"need x >= m >= 0, got x={x}, m={m}")
    return math.lgamma(x + 1) - math.lgamma(m + 1) - math.lgamma(x - m + 1)


def count_vs_bound(counts, alpha, gamma) -> dict:
    """Compare exact substructure counts against C((1+gamma) alpha, m)."""
    from . import SCHEMA_VERSION

    gamma = float(gamma)
    entries = []
    for m, count in counts:
        ln_count = math.log(count) if count > 0 else float("-inf")
        ln_bound = log_binomial((1 + gamma) * alpha, m)
        entries.append(
            {
                "m": m,
                "count": str(count),
                "ln_count": ln_count,
                "ln_bound": ln_bound,
                "ok": ln_count <= ln_bound,
            }
        )
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "count-vs-bound",
        "alpha": alpha,
        "gamma": gamma,
        "entries": entries,
        "all_ok": all(e["ok"] for e in entries),
    }
