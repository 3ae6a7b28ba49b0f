"""Dense graphs and the collinear-triple hypergraph built from geometries.

Graphs are adjacency bitset rows (numpy uint64). All builders are
deterministic: identical inputs give byte-identical structures.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from . import kernels
from .errors import EmptySetError, GuardError
from .polar import PolarSpace
from .projective import ProjSpace, gaussian_binomial

COLLINEARITY_GUARD = 5 * 10**4
OPPOSITENESS_GUARD = 10**4
INTERSECTION_GUARD = 5 * 10**4
HYPER_VERTEX_GUARD = 5 * 10**4
HYPER_EDGE_GUARD = 2 * 10**7
PAIR_TABLE_GUARD = 2000


@dataclass(frozen=True)
class GraphMeta:
    kind: str
    family: str
    r: int
    t: object  # Fraction or None
    q: int


def pack_bool_rows(mat: np.ndarray) -> np.ndarray:
    """Boolean (n, n) adjacency -> (n, w) uint64 bitset rows."""
    n = mat.shape[0]
    w = kernels.words_for(n)
    packed = np.packbits(mat, axis=1, bitorder="little")
    out = np.zeros((n, w * 8), dtype=np.uint8)
    out[:, : packed.shape[1]] = packed
    return np.ascontiguousarray(out.view(np.uint64))


class DenseGraph:
    """Immutable n-vertex graph as bitset adjacency rows."""

    def __init__(self, rows: np.ndarray, meta: GraphMeta, labels=None):
        self.rows = rows
        self.n = rows.shape[0]
        self.w = rows.shape[1]
        self.meta = meta
        self.labels = labels  # vertex -> geometry object (point index, flag, ...)
        self._validate()

    def _validate(self):
        n = self.n
        for i in range(n):
            if kernels.mask_contains(self.rows[i], i):
                raise AssertionError("diagonal must be empty")
        unpacked = self.adjacency_bool()
        if not (unpacked == unpacked.T).all():
            raise AssertionError("adjacency must be symmetric")

    def adjacency_bool(self) -> np.ndarray:
        bits = np.unpackbits(self.rows.view(np.uint8), axis=1, bitorder="little")
        return bits[:, : self.n].astype(bool)

    def degrees(self) -> np.ndarray:
        return kernels.degrees_in_mask(self.rows, kernels.full_mask(self.n))

    def is_regular(self) -> bool:
        d = self.degrees()
        return bool((d == d[0]).all())

    def degree(self) -> int:
        d = self.degrees()
        if not (d == d[0]).all():
            raise AssertionError(f"{self.meta.kind} graph is not regular")
        return int(d[0])

    def edge_count(self) -> int:
        return int(kernels.induced_edge_count(self.rows, kernels.full_mask(self.n)))

    def induced_edge_count(self, vertices) -> int:
        mask = vertices if isinstance(vertices, np.ndarray) else kernels.to_mask(vertices, self.n)
        return int(kernels.induced_edge_count(self.rows, mask))

    def neighbors(self, i: int) -> list:
        return kernels.mask_indices(self.rows[i])


def collinearity_graph(space: PolarSpace) -> DenseGraph:
    if space.n_points > COLLINEARITY_GUARD:
        raise GuardError(f"{space.n_points} points exceeds guard {COLLINEARITY_GUARD}")
    rows = pack_bool_rows(space.collinear_strict)
    meta = GraphMeta("collinearity", space.family, space.rank, space.t, space.q)
    return DenseGraph(rows, meta, labels=list(range(space.n_points)))


def oppositeness_graph(space: PolarSpace) -> DenseGraph:
    flags = space.maximal_flags()
    if len(flags) > OPPOSITENESS_GUARD:
        raise GuardError(f"{len(flags)} flags exceeds guard {OPPOSITENESS_GUARD}")
    subs = space.subspaces_by_dim
    ce = space.collinear_or_equal
    # per-dimension oppositeness of subspaces, then AND over flag levels
    level_opp = {}
    for d in range(1, space.rank + 1):
        items = [np.array(s, dtype=np.int64) for s in subs[d]]
        m = len(items)
        opp = np.zeros((m, m), dtype=bool)
        for a in range(m):
            for b in range(a + 1, m):
                block = ce[np.ix_(items[a], items[b])]
                val = not (block.all(axis=1).any() or block.all(axis=0).any())
                opp[a, b] = opp[b, a] = val
        level_opp[d] = opp
    nf = len(flags)
    adj = np.ones((nf, nf), dtype=bool)
    chains = np.array(flags, dtype=np.int64)
    for d in range(1, space.rank + 1):
        idx = chains[:, d - 1]
        adj &= level_opp[d][np.ix_(idx, idx)]
    np.fill_diagonal(adj, False)
    meta = GraphMeta("oppositeness", space.family, space.rank, space.t, space.q)
    return DenseGraph(pack_bool_rows(adj), meta, labels=flags)


def subspace_intersection_graph(pg: ProjSpace, k: int) -> DenseGraph:
    """Vertices: (k-1)-dimensional subspaces of PG; edges: nonempty meets."""
    if k not in (2, 3):
        raise GuardError("only line (k=2) and plane (k=3) graphs are supported")
    subs = _subspaces_of_pg(pg, k)
    m = len(subs)
    if m > INTERSECTION_GUARD:
        raise GuardError(f"{m} subspaces exceeds guard {INTERSECTION_GUARD}")
    w = kernels.words_for(pg.n_points)
    masks = np.zeros((m, w), dtype=np.uint64)
    for i, s in enumerate(subs):
        for p in s:
            masks[i, p >> 6] |= np.uint64(1) << np.uint64(p & 63)
    adj = np.zeros((m, m), dtype=bool)
    for i in range(m):
        inter = (masks[i + 1 :] & masks[i]).any(axis=1)
        adj[i, i + 1 :] = inter
        adj[i + 1 :, i] = inter
    kind = "line-intersection" if k == 2 else "plane-intersection"
    meta = GraphMeta(kind, "pg", pg.r + 1, None, pg.q)
    return DenseGraph(pack_bool_rows(adj), meta, labels=subs)


def _subspaces_of_pg(pg: ProjSpace, k: int):
    """All (k-1)-dimensional projective subspaces as sorted point tuples."""
    if k == 2:
        return [tuple(int(x) for x in row) for row in pg.lines]
    planes = set()
    lines = pg.lines
    F = pg.field
    for row in lines:
        base = [int(x) for x in row]
        in_line = set(base)
        for c in range(pg.n_points):
            if c in in_line:
                continue
            pts = set(base)
            pts.add(c)
            for s in base:
                pts.update(pg.line_points(s, c))
            planes.add(tuple(sorted(pts)))
    return sorted(planes)


class TripleHypergraph:
    """Collinear-triple hypergraph of PG(r, q).

    Materialized mode stores the sorted triple list, per-line point rows and
    a pair -> line lookup. Closed-form mode only carries the aggregate
    quantities (vertex count, edge count, full codegree) plus a handle on
    the geometry for on-demand induced queries.
    """

    def __init__(self, pg: ProjSpace, materialized: bool):
        self.geometry = pg
        self.n = pg.n_points
        self.q = pg.q
        self.r = pg.r
        self.edge_count = self.n * (self.n - 1) * (self.q - 1) // 6
        self.max_codegree_full = self.q - 1
        self.materialized = materialized
        self.edges = None
        self.line_points = None
        self.pair_line = None
        if materialized:
            self._materialize()

    def _materialize(self):
        pg = self.geometry
        lines = pg.lines
        self.line_points = lines
        q = self.q
        tri_per_line = (q + 1) * q * (q - 1) // 6
        edges = np.empty((len(lines) * tri_per_line, 3), dtype=np.int32)
        pos = 0
        from itertools import combinations

        for row in lines:
            pts = [int(x) for x in row]
            for tri in combinations(pts, 3):
                edges[pos] = tri
                pos += 1
        assert pos == self.edge_count, (pos, self.edge_count)
        order = np.lexsort((edges[:, 2], edges[:, 1], edges[:, 0]))
        self.edges = np.ascontiguousarray(edges[order])
        self.edges.setflags(write=False)
        if self.n <= PAIR_TABLE_GUARD:
            pair = np.full((self.n, self.n), -1, dtype=np.int32)
            for lid, row in enumerate(lines):
                pts = [int(x) for x in row]
                for a in pts:
                    for b in pts:
                        if a != b:
                            pair[a, b] = lid
            pair.setflags(write=False)
            self.pair_line = pair

    # -- induced-subhypergraph statistics

    def _member_array(self, vertices) -> np.ndarray:
        member = np.zeros(self.n, dtype=np.uint8)
        for v in vertices:
            member[v] = 1
        return member

    def _line_occupancy(self, vertices) -> np.ndarray:
        if self.line_points is None:
            raise GuardError("line table not materialized; use sample statistics instead")
        member = self._member_array(vertices)
        return member[self.line_points].sum(axis=1).astype(np.int64)

    def induced_edge_count(self, vertices) -> int:
        occ = self._line_occupancy(vertices)
        c = occ[occ >= 3]
        return int((c * (c - 1) * (c - 2) // 6).sum())

    def max_codegree(self, vertices) -> int:
        """Delta_2 over the induced subhypergraph."""
        vertices = list(vertices)
        if len(vertices) < 2:
            return 0
        occ = self._line_occupancy(vertices)
        top = int(occ.max(initial=0))
        return max(0, top - 2)

    def avg_degree(self, vertices) -> Fraction:
        vertices = list(vertices)
        if not vertices:
            raise EmptySetError("average degree over the empty set")
        return Fraction(3 * self.induced_edge_count(vertices), len(vertices))

    def third_masks(self) -> np.ndarray:
        """(n, n, w) pair -> completing-vertex bitsets (materialized mode)."""
        if self.pair_line is None:
            raise GuardError("pair table not materialized")
        n = self.n
        w = kernels.words_for(n)
        third = np.zeros((n, n, w), dtype=np.uint64)
        for lid, row in enumerate(self.line_points):
            pts = [int(x) for x in row]
            for a in pts:
                for b in pts:
                    if a == b:
                        continue
                    for c in pts:
                        if c != a and c != b:
                            third[a, b, c >> 6] |= np.uint64(1) << np.uint64(c & 63)
        return third

    def descriptor(self) -> dict:
        return {
            "kind": "collinear-triples",
            "r": self.r,
            "q": self.q,
            "vertices": self.n,
            "edges": self.edge_count,
            "max_codegree": self.max_codegree_full,
            "materialized": self.materialized,
        }


def collinear_triple_hypergraph(pg: ProjSpace, materialize: bool | None = None) -> TripleHypergraph:
    """The 3-uniform hypergraph of collinear point triples of PG(r, q).

    The closed-form edge count theta (theta - 1)(q - 1)/6 always holds; the
    triple list is materialized only within the vertex and edge guards
    (auto mode), since e.g. PG(3,31) has ~4.7e9 triples.
    """
    theta = pg.n_points
    edge_count = theta * (theta - 1) * (pg.q - 1) // 6
    if materialize is None:
        materialize = theta <= HYPER_VERTEX_GUARD and edge_count <= HYPER_EDGE_GUARD
    if materialize:
        if theta > HYPER_VERTEX_GUARD:
            raise GuardError(f"{theta} vertices exceeds guard {HYPER_VERTEX_GUARD}")
        if edge_count > HYPER_EDGE_GUARD:
            raise GuardError(f"{edge_count} triples exceeds guard {HYPER_EDGE_GUARD}")
    return TripleHypergraph(pg, materialize)
