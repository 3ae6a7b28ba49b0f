"""p-random subset experiments on PG(r, q).

Sampling is counter-based: point i enters the trial-t sample iff a SplitMix64
stream keyed by (seed, t, i) falls below floor(p 2^64). Samples are therefore
reproducible, scheduling-independent, and nested across p for a fixed trial,
which keeps the independence number monotone along the grid.

Alpha measurement is exact (branch and bound) for small or triple-free
samples and otherwise a certified lower bound: max of greedy-plus-swaps and
the deletion bound v - e. Results never present a heuristic as exact.
"""

from __future__ import annotations

import csv
import io
import math
import time
from dataclasses import dataclass, field
from statistics import median

import numpy as np

from . import SCHEMA_VERSION, kernels
from .containers import log_binomial
from .errors import BudgetExceeded, DomainError, GuardError
from .graphs import TripleHypergraph
from .projective import ProjSpace

EXACT_SIZE_LIMIT = 300
SWAP_SIZE_LIMIT = 4000
TRIAL_BUDGET = 2 * 10**6
SWEEP_GUARD = 5000  # points * trials

CSV_HEADER = ["r", "q", "p", "seed", "trial", "v", "e", "alpha", "alpha_kind", "elapsed_ms"]


@dataclass
class TrialRecord:
    r: int
    q: int
    p: float
    seed: int
    trial: int
    v_sampled: int
    e_sampled: int
    alpha: int
    alpha_kind: str  # "exact" | "lower_bound"
    elapsed_ms: float

    def csv_row(self) -> list:
        return [
            self.r,
            self.q,
            repr(self.p),
            self.seed,
            self.trial,
            self.v_sampled,
            self.e_sampled,
            self.alpha,
            self.alpha_kind,
            f"{self.elapsed_ms:.3f}",
        ]


@dataclass
class SweepTable:
    r: int
    q: int
    seed: int
    trials: int
    grid: list
    records: list = field(default_factory=list)

    @property
    def boundaries(self) -> dict:
        return regime_boundaries(self.r, self.q)

    def per_p(self, p: float) -> list:
        return [rec for rec in self.records if rec.p == p]

    def aggregates(self) -> list:
        out = []
        for p in self.grid:
            recs = self.per_p(p)
            alphas = [rec.alpha for rec in recs]
            out.append(
                {
                    "p": p,
                    "median_alpha": float(median(alphas)),
                    "min_alpha": min(alphas),
                    "max_alpha": max(alphas),
                    "mean_v": sum(rec.v_sampled for rec in recs) / len(recs),
                    "mean_e": sum(rec.e_sampled for rec in recs) / len(recs),
                    "exact_fraction": sum(rec.alpha_kind == "exact" for rec in recs) / len(recs),
                }
            )
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for rec in self.records:
            writer.writerow(rec.csv_row())
        return buf.getvalue()

    def canonical_bytes(self) -> bytes:
        """CSV bytes with the timing column zeroed; the reproducibility unit.

        Wall-clock timing is the single non-deterministic field, so the
        byte-identity contract covers everything except elapsed_ms.
        """
        rows = [",".join(CSV_HEADER)]
        for rec in self.records:
            cells = rec.csv_row()
            cells[-1] = "0"
            rows.append(",".join(str(c) for c in cells))
        return ("\n".join(rows) + "\n").encode()

    def sidecar(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": "sweep-sidecar",
            "r": self.r,
            "q": self.q,
            "seed": self.seed,
            "trials": self.trials,
            "grid": self.grid,
            "boundaries": self.boundaries,
            "aggregates": self.aggregates(),
        }


def regime_boundaries(r: int, q: int) -> dict:
    return {
        "sparse_upper": q ** (-(r + 1) / 2),
        "mid_upper": q ** (-(r - 1) / 2) * math.log(q) ** 2,
    }


def sample_points(pg: ProjSpace, p: float, seed: int, trial: int) -> np.ndarray:
    """Sorted point indices of the p-random sample for (seed, trial)."""
    if p <= 0.0:
        return np.empty(0, dtype=np.int64)
    if p >= 1.0:
        return np.arange(pg.n_points, dtype=np.int64)
    thr = np.uint64(min(int(p * 2.0**64), 2**64 - 1))
    mask = kernels.sample_mask(pg.n_points, thr, seed, trial)
    return np.flatnonzero(mask).astype(np.int64)


def _sample_tables(pg: ProjSpace):
    add_t, mul_t, inv_t, _ = pg.field.tables()
    return add_t, mul_t, inv_t


def sample_triple_stats(pg: ProjSpace, sample: np.ndarray):
    """(induced triple count, per-vertex triple degrees) for a point sample."""
    s = len(sample)
    if s < 3:
        return 0, np.zeros(s, dtype=np.int64)
    add_t, mul_t, inv_t = _sample_tables(pg)
    spts = np.ascontiguousarray(pg.points[sample].astype(np.int32))
    g2l = np.full(pg.n_points, -1, dtype=np.int32)
    g2l[sample] = np.arange(s, dtype=np.int32)
    deg3 = np.zeros(s, dtype=np.int64)
    e3 = kernels.pair_triple_stats(
        spts, pg.q, add_t, mul_t, inv_t, pg.enc_to_index, g2l, deg3
    )
    return int(e3), deg3


def alpha_of_sample(h: TripleHypergraph, sample, budget: int = TRIAL_BUDGET):
    """(alpha, kind, v, e) for the induced subhypergraph on the sample.

    Exact when the sample is triple-free or small enough for branch and
    bound within the node budget; otherwise a certified lower bound,
    at least max(greedy-with-swaps, v - e).
    """
    pg = h.geometry
    sample = np.asarray(sorted(int(x) for x in sample), dtype=np.int64)
    v = len(sample)
    if v == 0:
        return 0, "exact", 0, 0
    e3, deg3 = sample_triple_stats(pg, sample)
    if e3 == 0:
        return v, "exact", v, 0
    add_t, mul_t, inv_t = _sample_tables(pg)
    spts = np.ascontiguousarray(pg.points[sample].astype(np.int32))
    g2l = np.full(pg.n_points, -1, dtype=np.int32)
    g2l[sample] = np.arange(v, dtype=np.int32)
    incumbent = 0
    if v <= EXACT_SIZE_LIMIT:
        third = kernels.local_third_masks(spts, pg.q, add_t, mul_t, inv_t, pg.enc_to_index, g2l)
        best, _, _, timed_out = kernels.cap_branch_bound(third, int(budget))
        if not timed_out:
            return int(best), "exact", v, e3
        incumbent = int(best)
    if v <= SWAP_SIZE_LIMIT:
        order = np.argsort(deg3, kind="stable").astype(np.int64)
        size, _ = kernels.cap_greedy_swap(
            spts, pg.q, add_t, mul_t, inv_t, pg.enc_to_index, g2l, order, 12
        )
        incumbent = max(incumbent, int(size))
    alpha = max(incumbent, v - e3, 1)
    return alpha, "lower_bound", v, e3


def run_sweep(
    r: int,
    q: int,
    pmin: float,
    pmax: float,
    points: int,
    trials: int,
    seed: int,
    budget: int = TRIAL_BUDGET,
) -> SweepTable:
    """Log-spaced p grid, `trials` samples per grid point."""
    from .gf import field_of_order
    from .graphs import collinear_triple_hypergraph
    from .projective import build_pg

    if trials < 1:
        raise GuardError("need at least one trial")
    if points < 1:
        raise GuardError("need at least one grid point")
    if points * trials > SWEEP_GUARD:
        raise GuardError(f"{points}*{trials} trials exceeds guard {SWEEP_GUARD}")
    if not (q ** (-r) <= pmin <= pmax <= 1.0):
        raise GuardError(f"grid must lie within [q^-r, 1] = [{q**-r}, 1]")
    pg = build_pg(r, field_of_order(q))
    h = collinear_triple_hypergraph(pg, materialize=False)
    if points == 1:
        grid = [pmin]
    else:
        lo, hi = math.log(pmin), math.log(pmax)
        grid = [math.exp(lo + (hi - lo) * i / (points - 1)) for i in range(points)]
    table = SweepTable(r=r, q=q, seed=seed, trials=trials, grid=grid)
    for p in grid:
        for t in range(trials):
            t0 = time.monotonic()
            sample = sample_points(pg, p, seed, t)
            alpha, kind, v, e3 = alpha_of_sample(h, sample, budget)
            elapsed_ms = (time.monotonic() - t0) * 1000.0
            assert alpha >= v - e3, "deletion bound violated"
            table.records.append(
                TrialRecord(
                    r=r,
                    q=q,
                    p=p,
                    seed=seed,
                    trial=t,
                    v_sampled=v,
                    e_sampled=e3,
                    alpha=alpha,
                    alpha_kind=kind,
                    elapsed_ms=elapsed_ms,
                )
            )
    return table


def read_sweep_csv(text: str) -> list:
    """Parse the published CSV schema back into TrialRecords."""
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    if header != CSV_HEADER:
        raise DomainError(f"unexpected CSV header {header}")
    out = []
    for row in reader:
        out.append(
            TrialRecord(
                r=int(row[0]),
                q=int(row[1]),
                p=float(row[2]),
                seed=int(row[3]),
                trial=int(row[4]),
                v_sampled=int(row[5]),
                e_sampled=int(row[6]),
                alpha=int(row[7]),
                alpha_kind=row[8],
                elapsed_ms=float(row[9]),
            )
        )
    return out


def first_moment_bound(
    r: int,
    q: int,
    p: float,
    m: int,
    ln_family_count: float | None = None,
    size_bound: float | None = None,
    c2: float = 1.0,
) -> float:
    """ln of the union bound |C| p^m C(size_bound, m) over a container family.

    Defaults follow the closed-form envelopes: ln|C| <= c2 q^((r-1)/2) ln^2 q
    and container size <= 8 q^(r-1).
    """
    if ln_family_count is None:
        ln_family_count = c2 * q ** ((r - 1) / 2) * math.log(q) ** 2
    if size_bound is None:
        size_bound = 8.0 * q ** (r - 1)
    if m > size_bound:
        raise DomainError(f"m = {m} exceeds the container size bound {size_bound}")
    if not 0 < p <= 1:
        raise DomainError("need 0 < p <= 1")
    return ln_family_count + m * math.log(p) + log_binomial(float(size_bound), m)
