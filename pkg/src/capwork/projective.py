"""PG(r,q): points, lines and incidences.

Points are normalized homogeneous coordinate rows (first nonzero coordinate
equals 1) indexed in lexicographic order of the coordinate tuple. Lines are
rows of q+1 sorted point indices, themselves sorted lexicographically, so
all indexing is deterministic. Line enumeration goes through reduced
row-echelon forms of 2 x (r+1) matrices, which visits every line exactly once.
"""

from __future__ import annotations

from functools import cached_property

import numpy as np

from .errors import GuardError
from .gf import Field

POINT_GUARD = 10**6


def gaussian_binomial(a: int, b: int, q: int) -> int:
    """Number of b-dimensional subspaces of GF(q)^a, exact integer."""
    if not 0 <= b <= a:
        raise ValueError(f"need 0 <= b <= a, got a={a}, b={b}")
    num = 1
    den = 1
    for i in range(b):
        num *= q ** (a - i) - 1
        den *= q ** (i + 1) - 1
    assert num % den == 0
    return num // den


def gaussian_binomial_pascal(a: int, b: int, q: int) -> int:
    """q-Pascal recursion, used as an independent cross-check."""
    if not 0 <= b <= a:
        raise ValueError(f"need 0 <= b <= a, got a={a}, b={b}")
    table = [[0] * (b + 1) for _ in range(a + 1)]
    for i in range(a + 1):
        table[i][0] = 1
        for j in range(1, min(i, b) + 1):
            table[i][j] = table[i - 1][j - 1] + (q**j) * table[i - 1][j]
    return table[a][b]


def _all_vectors(q: int, dim: int) -> np.ndarray:
    """All q^dim coordinate rows in lex order (coordinate 0 most significant)."""
    total = q**dim
    out = np.empty((total, dim), dtype=np.int32)
    idx = np.arange(total, dtype=np.int64)
    for pos in range(dim - 1, -1, -1):
        out[:, pos] = idx % q
        idx //= q
    return out


class ProjSpace:
    """Immutable PG(r, q) with indexed points and (lazily built) lines."""

    def __init__(self, r: int, field: Field):
        if r < 1:
            raise ValueError("projective dimension must be >= 1")
        self.r = r
        self.field = field
        self.q = field.q
        self.dim = r + 1
        theta = gaussian_binomial(r + 1, 1, self.q)
        if theta > POINT_GUARD:
            raise GuardError(f"PG({r},{self.q}) has {theta} points, guard is {POINT_GUARD}")
        self.n_points = theta
        self._enc_pows = np.array(
            [self.q**k for k in range(r, -1, -1)], dtype=np.int64
        )
        self.points, self.enc_to_index = self._enumerate_points()

    def __repr__(self):
        return f"PG({self.r},{self.q})"

    def _enumerate_points(self):
        vecs = _all_vectors(self.q, self.dim)
        nz = vecs != 0
        any_nz = nz.any(axis=1)
        lead = np.argmax(nz, axis=1)
        keep = any_nz & (vecs[np.arange(len(vecs)), lead] == 1)
        pts = np.ascontiguousarray(vecs[keep])
        assert len(pts) == self.n_points
        enc2idx = np.full(self.q**self.dim, -1, dtype=np.int32)
        enc2idx[np.flatnonzero(keep)] = np.arange(self.n_points, dtype=np.int32)
        pts.setflags(write=False)
        enc2idx.setflags(write=False)
        return pts, enc2idx

    def encode(self, coords) -> int:
        return int(np.dot(np.asarray(coords, dtype=np.int64), self._enc_pows))

    def point_index(self, coords) -> int:
        idx = int(self.enc_to_index[self.encode(coords)])
        if idx < 0:
            raise ValueError(f"{coords} is not a normalized point of {self}")
        return idx

    def normalize(self, coords):
        """Scale so the first nonzero coordinate is 1."""
        F = self.field
        coords = list(int(c) for c in coords)
        for c in coords:
            if c:
                s = F.inv(c)
                return tuple(F.mul(s, x) for x in coords)
        raise ValueError("cannot normalize the zero vector")

    def line_points(self, i: int, j: int) -> tuple:
        """Sorted point indices of the line through points i and j."""
        if i == j:
            raise ValueError("line through a single point is undefined")
        F = self.field
        P = self.points[i]
        Q = self.points[j]
        idxs = [i, j]
        for lam in range(1, self.q):
            R = tuple(F.add(int(P[k]), F.mul(lam, int(Q[k]))) for k in range(self.dim))
            idxs.append(self.point_index(self.normalize(R)))
        # lam = 0 gives P itself; Q is the point at infinity of the pencil
        return tuple(sorted(idxs))

    @cached_property
    def lines(self) -> np.ndarray:
        """(L, q+1) int32 array of sorted point indices, lex-sorted rows."""
        q = self.q
        dim = self.dim
        add_t, mul_t, _, _ = self.field.tables()
        blocks = []
        for i in range(dim):
            for j in range(i + 1, dim):
                # RREF with pivot columns i < j
                free1 = [k for k in range(i + 1, dim) if k != j]
                free2 = [k for k in range(j + 1, dim)]
                n1 = q ** len(free1)
                n2 = q ** len(free2)
                row1 = np.zeros((n1, dim), dtype=np.int32)
                row1[:, i] = 1
                if free1:
                    row1[:, free1] = _all_vectors(q, len(free1))
                row2 = np.zeros((n2, dim), dtype=np.int32)
                row2[:, j] = 1
                if free2:
                    row2[:, free2] = _all_vectors(q, len(free2))
                a = np.repeat(row1, n2, axis=0)
                b = np.tile(row2, (n1, 1))
                m = n1 * n2
                pts = np.empty((m, q + 1, dim), dtype=np.int32)
                pts[:, 0, :] = b
                pts[:, 1, :] = a
                for lam in range(1, q):
                    pts[:, lam + 1, :] = add_t[a, mul_t[lam, b]]
                enc = (pts.astype(np.int64) * self._enc_pows).sum(axis=2)
                idxs = self.enc_to_index[enc]
                assert (idxs >= 0).all()
                blocks.append(np.sort(idxs.astype(np.int32), axis=1))
        all_lines = np.concatenate(blocks, axis=0)
        order = np.lexsort(tuple(all_lines[:, c] for c in range(q, -1, -1)))
        out = np.ascontiguousarray(all_lines[order])
        assert len(out) == gaussian_binomial(self.r + 1, 2, self.q)
        out.setflags(write=False)
        return out

    @cached_property
    def point_lines(self):
        """CSR incidence: point_lines[i] = sorted array of line ids through i."""
        lines = self.lines
        flat = lines.ravel()
        line_ids = np.repeat(np.arange(len(lines), dtype=np.int32), lines.shape[1])
        order = np.argsort(flat, kind="stable")
        starts = np.searchsorted(flat[order], np.arange(self.n_points + 1))
        return [line_ids[order[starts[k] : starts[k + 1]]] for k in range(self.n_points)]

    def descriptor(self) -> dict:
        return {
            "family": "pg",
            "r": self.r,
            "q": self.q,
            "p": self.field.p,
            "e": self.field.e,
            "modulus": list(self.field.modulus),
            "point_count": self.n_points,
            "line_count": gaussian_binomial(self.r + 1, 2, self.q),
        }


def build_pg(r: int, field: Field) -> ProjSpace:
    """PG(r, q) with points indexed immediately and lines built on demand."""
    return ProjSpace(r, field)
