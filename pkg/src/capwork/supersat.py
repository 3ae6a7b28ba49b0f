"""Supersaturation checkers: interlacing edge bound, its epsilon form,
the convexity floor for line-weight distributions, collinear-triple lower
bounds, and the intersecting-plane-pair bound.

All bound values are exact rationals; verdicts compare integers against
rationals with no floating-point rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import kernels
from .errors import (
    GuardCubicError,
    GuardError,
    NonIntegralKError,
    PreconditionSizeError,
)
from .projective import gaussian_binomial

EXACT_SUBSET_GUARD = 10**7


def interlacing_edge_bound(n: int, d: int, lam, s: int) -> Fraction:
    """Lower bound on 2 e(S) for |S| = s in a d-regular graph: ((d - lam)/n) s^2 + lam s."""
    if not 0 <= s <= n:
        raise PreconditionSizeError(f"need 0 <= s <= {n}")
    lam = Fraction(lam)
    return Fraction(d - lam, n) * s * s + lam * s


def epsilon_supersat_bound(n: int, d: int, lam, epsilon, s: int) -> Fraction:
    """(eps/(1+eps)) ((d - lam)/n) s^2, for s past the (1+eps) ratio-bound mark."""
    lam = Fraction(lam)
    epsilon = Fraction(epsilon)
    threshold = (1 + epsilon) * Fraction(-lam * n, 1) / (d - lam)
    if s < threshold:
        raise PreconditionSizeError(f"s = {s} below (1+eps) alpha = {threshold}")
    return (epsilon / (1 + epsilon)) * Fraction(d - lam, n) * s * s


def min_pair_sum_floor(s: int, y: int) -> int:
    """Minimum of sum C(w_i, 2) over s nonnegative integers summing to s y - 1.

    Convexity forces the balanced split: s - 1 parts equal to y and one part
    y - 1, giving (s - 1) C(y, 2) + C(y - 1, 2).
    """
    if s < 1 or y < 1:
        raise PreconditionSizeError("need s, y >= 1")
    return (s - 1) * math.comb(y, 2) + math.comb(y - 1, 2)


def min_pair_sum_exhaustive(s: int, total: int, guard: int = 10**7) -> int:
    """True minimum of sum C(w_i, 2) over compositions of total into s parts.

    Independent oracle for min_pair_sum_floor; searches partitions of total
    into at most s parts (order is irrelevant to the objective).
    """
    if s < 1 or total < 0:
        raise PreconditionSizeError("need s >= 1 and total >= 0")
    if s * total > guard:
        raise GuardError(f"search size {s}*{total} exceeds guard")
    best = [None]

    def rec(remaining, parts_left, max_part, acc):
        if best[0] is not None and acc >= best[0]:
            return
        if parts_left == 0:
            if remaining == 0:
                best[0] = acc
            return
        # nonincreasing parts; enough capacity must remain
        hi = min(max_part, remaining)
        for w in range(hi, -1, -1):
            if w * parts_left < remaining:
                break
            rec(remaining - w, parts_left - 1, w, acc + w * (w - 1) // 2)

    rec(total, s, total, 0)
    assert best[0] is not None
    return best[0]


def triples_lower_bound(p_size: int, r: int, q: int, form: str) -> Fraction:
    """Lower bound on collinear triples among p_size points of PG(r, q).

    form="k":     p_size = k [r]_q for integer k > 1; bound
                  (k^2 (k-1)/6) [r]_q^2 - (k (k-1)/3) [r]_q.
    form="cubic": p_size >= 2 [r]_q; bound p_size^3 / (15 [r]_q). Guarded by
                  [r]_q >= 6: at [r]_q = 3 (the Fano plane) the cubic bound
                  exceeds the true minimum, so it is refused there.
    """
    lines_per_point = gaussian_binomial(r, 1, q)
    if form == "k":
        if p_size % lines_per_point != 0:
            raise NonIntegralKError(
                f"|P| = {p_size} is not an integer multiple of [r]_q = {lines_per_point}"
            )
        k = p_size // lines_per_point
        if k <= 1:
            raise NonIntegralKError(f"need k > 1, got k = {k}")
        lp = Fraction(lines_per_point)
        return Fraction(k * k * (k - 1), 6) * lp * lp - Fraction(k * (k - 1), 3) * lp
    if form == "cubic":
        if lines_per_point < 6:
            raise GuardCubicError(
                f"cubic form needs [r]_q >= 6, got {lines_per_point}"
            )
        if p_size < 2 * lines_per_point:
            raise PreconditionSizeError(
                f"cubic form needs |P| >= 2 [r]_q = {2 * lines_per_point}"
            )
        return Fraction(p_size**3, 15 * lines_per_point)
    raise NonIntegralKError(f"unknown form {form!r}")


def plane_pairs_bound(epsilon, q: int) -> Fraction:
    """Intersecting-plane pairs forced among (1+eps)(q^3+1) planes of PG(5, q)."""
    epsilon = Fraction(epsilon)
    if epsilon < 0:
        raise PreconditionSizeError("epsilon must be nonnegative")
    return epsilon * (q**4 + q**2 + 1)


@dataclass
class SupersatReport:
    instance: str
    subset_size: int
    bound_value: str  # exact rational, as a string for JSON stability
    min_observed: int
    mode: str  # "exact" or "sampled:N"
    holds: bool

    def to_json(self) -> dict:
        from . import SCHEMA_VERSION

        return {
            "schema_version": SCHEMA_VERSION,
            "kind": "supersat-report",
            "instance": self.instance,
            "subset_size": self.subset_size,
            "bound_value": self.bound_value,
            "min_observed": self.min_observed,
            "mode": self.mode,
            "holds": self.holds,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "SupersatReport":
        return cls(
            instance=obj["instance"],
            subset_size=obj["subset_size"],
            bound_value=obj["bound_value"],
            min_observed=obj["min_observed"],
            mode=obj["mode"],
            holds=obj["holds"],
        )


def min_induced_edges(
    obj,
    s: int,
    mode: str = "exact",
    trials: int = 10**4,
    seed: int = 0,
    instance: str = "",
    bound: Fraction | None = None,
) -> SupersatReport:
    """Minimum induced edge count over s-subsets, exact or sampled.

    obj is a DenseGraph or a materialized TripleHypergraph. The exact mode
    enumerates all s-subsets (graphs: pruned bitset scan; hypergraphs:
    itertools over the guard-checked range). The report's `holds` verdict
    compares the minimum against the supplied rational bound (on e(S)),
    defaulting to 0.
    """
    from .graphs import DenseGraph, TripleHypergraph

    if s <= 1:
        report_min = 0
        mode_used = "exact"
    elif mode == "exact":
        if math.comb(obj.n, s) > EXACT_SUBSET_GUARD:
            raise GuardError(f"C({obj.n},{s}) exceeds exact-mode guard {EXACT_SUBSET_GUARD}")
        if isinstance(obj, DenseGraph):
            report_min, _ = kernels.min_edges_exact(obj.rows, s)
            report_min = int(report_min)
        else:
            report_min = _min_triples_exact(obj, s)
        mode_used = "exact"
    elif mode == "sampled":
        report_min = None
        for t in range(trials):
            subset = kernels.sample_subset(obj.n, s, seed, t)
            if isinstance(obj, DenseGraph):
                e = obj.induced_edge_count(subset)
            else:
                e = obj.induced_edge_count(subset)
            if report_min is None or e < report_min:
                report_min = e
        mode_used = f"sampled:{trials}"
    else:
        raise PreconditionSizeError(f"unknown mode {mode!r}")
    bound = Fraction(0) if bound is None else Fraction(bound)
    return SupersatReport(
        instance=instance or f"{type(obj).__name__}(n={obj.n})",
        subset_size=s,
        bound_value=str(bound),
        min_observed=int(report_min),
        mode=mode_used,
        holds=Fraction(int(report_min)) >= bound,
    )


def _min_triples_exact(h, s: int) -> int:
    from itertools import combinations

    best = None
    for subset in combinations(range(h.n), s):
        e = h.induced_edge_count(subset)
        if best is None or e < best:
            best = e
            if best == 0:
                # zero cannot be beaten, but keep scanning is pointless
                break
    return best
