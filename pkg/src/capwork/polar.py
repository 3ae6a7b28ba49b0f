"""Finite classical polar spaces embedded in PG(d, q).

Supported families (standard fixed forms, so point/line/generator indices are
reproducible):

  symplectic          W(2r-1, q)   alternating form, antidiagonal 2x2 blocks
  parabolic-quadric   Q(2r, q)     x0^2 + x1 x2 + x3 x4 + ...
  hyperbolic-quadric  Q+(2r-1, q)  x0 x1 + x2 x3 + ...
  elliptic-quadric    Q-(2r+1, q)  f(x0, x1) + x2 x3 + ...   (f irreducible)
  hermitian           H(3, q) / H(4, q) on square-order fields, identity Gram

Quadric collinearity is decided by checking all q+1 points of the joining
line, which stays correct in characteristic 2 where the polar form
degenerates. Totally isotropic subspaces are found by depth-first extension
in point-index order and indexed by their sorted point tuples.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from .errors import (
    FormInconsistentError,
    GuardError,
    NotSquareOrderError,
    TypeMismatchError,
    UnsupportedFamilyError,
)
from .gf import Field
from .projective import ProjSpace, _all_vectors, gaussian_binomial

FLAG_GUARD = 10**6

FAMILIES = (
    "symplectic",
    "parabolic-quadric",
    "hyperbolic-quadric",
    "elliptic-quadric",
    "hermitian",
)


def qpow(q: int, t: Fraction) -> int:
    """q^t as an exact integer for t with denominator 1 or 2."""
    t = Fraction(t)
    if t.denominator == 1:
        return q**t.numerator
    if t.denominator == 2:
        root = round(q**0.5)
        if root * root != q:
            raise NotSquareOrderError(f"q = {q} is not a square, cannot take q^{t}")
        return root**t.numerator
    raise ValueError(f"unsupported exponent {t}")


@dataclass(frozen=True)
class PolarSpaceSpec:
    family: str
    rank: int
    field: Field
    hermitian_ambient: int | None = None  # projective dimension, rank-2 hermitian only

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise UnsupportedFamilyError(f"unknown family {self.family!r}")
        if self.rank < 2:
            raise UnsupportedFamilyError("polar spaces of rank < 2 are not supported")
        if self.family == "hermitian":
            if self.rank != 2:
                raise UnsupportedFamilyError("hermitian builds are restricted to rank 2")
            if self.hermitian_ambient not in (3, 4):
                raise UnsupportedFamilyError("hermitian ambient dimension must be 3 or 4")
            if self.field.e % 2 != 0:
                raise NotSquareOrderError("hermitian forms need a square-order field")

    @property
    def t(self) -> Fraction:
        if self.family == "symplectic" or self.family == "parabolic-quadric":
            return Fraction(1)
        if self.family == "hyperbolic-quadric":
            return Fraction(0)
        if self.family == "elliptic-quadric":
            return Fraction(2)
        return Fraction(1, 2) if self.hermitian_ambient == 3 else Fraction(3, 2)

    @property
    def ambient_dim(self) -> int:
        r = self.rank
        return {
            "symplectic": 2 * r - 1,
            "parabolic-quadric": 2 * r,
            "hyperbolic-quadric": 2 * r - 1,
            "elliptic-quadric": 2 * r + 1,
            "hermitian": self.hermitian_ambient,
        }[self.family]

    def expected_point_count(self) -> int | None:
        """((q^r - 1)/(q - 1)) (q^(r+t-1) + 1); None for hermitian (see build)."""
        if self.family == "hermitian":
            return None
        q = self.field.q
        r = self.rank
        return gaussian_binomial(r, 1, q) * (qpow(q, self.t + r - 1) + 1)


def _irreducible_binary_quadratic(field: Field):
    """Least (a, b) with x^2 + a x + b irreducible over GF(q)."""
    for a in field.elements():
        for b in field.elements():
            has_root = any(
                field.add(field.add(field.mul(x, x), field.mul(a, x)), b) == 0
                for x in field.elements()
            )
            if not has_root:
                return a, b
    raise FormInconsistentError("no irreducible quadratic found")


class PolarSpace:
    """Immutable polar space; subspaces and flags are built lazily."""

    def __init__(self, spec: PolarSpaceSpec):
        self.spec = spec
        self.field = spec.field
        self.q = spec.field.q
        self.rank = spec.rank
        self.t = spec.t
        self.family = spec.family
        self.ambient = ProjSpace(spec.ambient_dim, spec.field)
        self.dim = spec.ambient_dim + 1
        self.gram, self._qform = self._build_form()
        self.point_ids = self._enumerate_points()  # ambient point indices, ascending
        self.n_points = len(self.point_ids)
        expected = spec.expected_point_count()
        if expected is not None and expected != self.n_points:
            raise FormInconsistentError(
                f"{self}: enumerated {self.n_points} points, closed form gives {expected}"
            )
        self._ambient_to_local = {int(a): i for i, a in enumerate(self.point_ids)}

    def __repr__(self):
        return f"PS({self.family},r={self.rank},q={self.q})"

    # -- forms

    def _build_form(self):
        F = self.field
        d = self.dim
        gram = np.zeros((d, d), dtype=np.int64)
        qform = None
        if self.family == "symplectic":
            for k in range(0, d, 2):
                gram[k, k + 1] = 1
                gram[k + 1, k] = F.neg(1)
        elif self.family == "hyperbolic-quadric":
            qform = np.zeros((d, d), dtype=np.int64)
            for k in range(0, d, 2):
                qform[k, k + 1] = 1
        elif self.family == "parabolic-quadric":
            qform = np.zeros((d, d), dtype=np.int64)
            qform[0, 0] = 1
            for k in range(1, d, 2):
                qform[k, k + 1] = 1
        elif self.family == "elliptic-quadric":
            qform = np.zeros((d, d), dtype=np.int64)
            a, b = _irreducible_binary_quadratic(F)
            qform[0, 0] = 1
            qform[0, 1] = a
            qform[1, 1] = b
            for k in range(2, d, 2):
                qform[k, k + 1] = 1
        elif self.family == "hermitian":
            gram = np.eye(d, dtype=np.int64)
        if qform is not None:
            # polar form B(x, y) = Q(x+y) - Q(x) - Q(y); entries added in the field
            for i in range(d):
                for j in range(d):
                    gram[i, j] = F.add(int(qform[i, j]), int(qform[j, i]))
        return gram, qform

    def _eval_qform(self, v) -> int:
        F = self.field
        acc = 0
        qf = self._qform
        d = self.dim
        for i in range(d):
            vi = int(v[i])
            if not vi:
                continue
            for j in range(i, d):
                c = int(qf[i, j])
                if c:
                    acc = F.add(acc, F.mul(c, F.mul(vi, int(v[j]))))
        return acc

    def _eval_bilinear(self, u, v) -> int:
        F = self.field
        acc = 0
        d = self.dim
        for i in range(d):
            ui = int(u[i])
            if not ui:
                continue
            for j in range(d):
                c = int(self.gram[i, j])
                if c:
                    acc = F.add(acc, F.mul(F.mul(ui, c), int(v[j])))
        return acc

    def _eval_hermitian(self, u, v) -> int:
        F = self.field
        acc = 0
        for i in range(self.dim):
            ui = int(u[i])
            if ui:
                acc = F.add(acc, F.mul(ui, F.conjugate(int(v[i]))))
        return acc

    def _is_singular_point(self, coords) -> bool:
        if self.family == "symplectic":
            return True
        if self.family == "hermitian":
            return self._eval_hermitian(coords, coords) == 0
        return self._eval_qform(coords) == 0

    def _enumerate_points(self):
        amb = self.ambient
        keep = [
            i for i in range(amb.n_points) if self._is_singular_point(amb.points[i])
        ]
        return np.array(keep, dtype=np.int32)

    # -- collinearity

    def _pairs_collinear_ambient(self, ai: int, aj: int) -> bool:
        """Joining line totally isotropic/singular (ambient point indices)."""
        amb = self.ambient
        if self.family == "symplectic":
            return self._eval_bilinear(amb.points[ai], amb.points[aj]) == 0
        if self.family == "hermitian":
            return self._eval_hermitian(amb.points[ai], amb.points[aj]) == 0
        # quadrics: all q+1 points of the line must be singular (char-2 safe)
        for pt in amb.line_points(ai, aj):
            if pt not in self._ambient_to_local:
                return False
        return True

    @cached_property
    def collinear_strict(self) -> np.ndarray:
        """Boolean matrix over local point indices; diagonal False."""
        n = self.n_points
        out = np.zeros((n, n), dtype=bool)
        for i in range(n):
            for j in range(i + 1, n):
                if self._pairs_collinear_ambient(int(self.point_ids[i]), int(self.point_ids[j])):
                    out[i, j] = out[j, i] = True
        out.setflags(write=False)
        return out

    def collinear(self, i: int, j: int) -> bool:
        """Local point indices; i == j is rejected."""
        if i == j:
            raise ValueError("collinear() needs two distinct points")
        return bool(self.collinear_strict[i, j])

    # -- totally isotropic subspaces, generators, flags

    def _span_with(self, span: frozenset, new_local: int) -> frozenset:
        amb = self.ambient
        new_amb = int(self.point_ids[new_local])
        pts = set(span)
        for s in span:
            for t in amb.line_points(int(self.point_ids[s]), new_amb):
                local = self._ambient_to_local.get(int(t))
                if local is None:
                    raise FormInconsistentError("span left the polar space")
                pts.add(local)
        pts.add(new_local)
        return frozenset(pts)

    @cached_property
    def subspaces_by_dim(self) -> dict:
        """dim k (vector) -> lex-sorted list of sorted local point tuples."""
        coll = self.collinear_strict
        levels = {1: [frozenset((i,)) for i in range(self.n_points)]}
        for k in range(2, self.rank + 1):
            seen = set()
            for span in levels[k - 1]:
                members = sorted(span)
                cand = np.flatnonzero(np.logical_and.reduce(coll[members]))
                for c in cand:
                    new_span = self._span_with(span, int(c))
                    seen.add(new_span)
            levels[k] = sorted(seen, key=lambda s: tuple(sorted(s)))
        return {k: [tuple(sorted(s)) for s in v] for k, v in levels.items()}

    @property
    def ti_lines(self):
        return self.subspaces_by_dim[2]

    @property
    def generators(self):
        return self.subspaces_by_dim[self.rank]

    def expected_subspace_count(self, k: int) -> int | None:
        """gaussian(r, k)_q * prod_{i=1..k} (q^(r+t-i) + 1); None for hermitian."""
        if self.family == "hermitian":
            return None
        q = self.q
        r = self.rank
        prod = 1
        for i in range(1, k + 1):
            prod *= qpow(q, self.t + r - i) + 1
        return gaussian_binomial(r, k, q) * prod

    def maximal_flags(self):
        """All full chains, as tuples of per-dimension subspace indices."""
        if self.rank > 3:
            raise GuardError("maximal flags supported for rank <= 3")
        subs = self.subspaces_by_dim
        count = 1
        for k in range(1, self.rank + 1):
            count *= len(subs[k])
        sets = {k: [frozenset(s) for s in subs[k]] for k in subs}
        flags = []
        for i1, p in enumerate(sets[1]):
            for i2, ln in enumerate(sets[2]):
                if not p <= ln:
                    continue
                if self.rank == 2:
                    flags.append((i1, i2))
                else:
                    for i3, pl in enumerate(sets[3]):
                        if ln <= pl:
                            flags.append((i1, i2, i3))
        if len(flags) > FLAG_GUARD:
            raise GuardError(f"{len(flags)} flags exceeds guard {FLAG_GUARD}")
        flags.sort()
        expected = self.expected_flag_count()
        if expected is not None and expected != len(flags):
            raise FormInconsistentError(
                f"{self}: {len(flags)} flags, closed form gives {expected}"
            )
        return flags

    def expected_flag_count(self) -> int | None:
        if self.family == "hermitian":
            return None
        q = self.q
        r = self.rank
        total = 1
        for i in range(1, r + 1):
            total *= (qpow(q, r + self.t - i) + 1) * gaussian_binomial(i, 1, q)
        return total

    # -- oppositeness

    @cached_property
    def collinear_or_equal(self) -> np.ndarray:
        out = self.collinear_strict.copy()
        np.fill_diagonal(out, True)
        out.setflags(write=False)
        return out

    def opposite_subspaces(self, a, b) -> bool:
        """No point of one collinear (or equal) to all points of the other."""
        if len(a) != len(b):
            raise TypeMismatchError("subspaces of different dimensions")
        ce = self.collinear_or_equal
        block = ce[np.ix_(list(a), list(b))]
        return not (block.all(axis=1).any() or block.all(axis=0).any())

    def opposite_flags(self, f1, f2) -> bool:
        subs = self.subspaces_by_dim
        for level, (i1, i2) in enumerate(zip(f1, f2), start=1):
            if not self.opposite_subspaces(subs[level][i1], subs[level][i2]):
                return False
        return True

    def descriptor(self) -> dict:
        return {
            "family": self.family,
            "r": self.rank,
            "t": str(self.t),
            "q": self.q,
            "p": self.field.p,
            "e": self.field.e,
            "modulus": list(self.field.modulus),
            "point_count": self.n_points,
        }


def build_polar_space(spec: PolarSpaceSpec) -> PolarSpace:
    return PolarSpace(spec)


def symplectic(rank: int, field: Field) -> PolarSpace:
    return PolarSpace(PolarSpaceSpec("symplectic", rank, field))


def parabolic_quadric(rank: int, field: Field) -> PolarSpace:
    return PolarSpace(PolarSpaceSpec("parabolic-quadric", rank, field))


def hyperbolic_quadric(rank: int, field: Field) -> PolarSpace:
    return PolarSpace(PolarSpaceSpec("hyperbolic-quadric", rank, field))


def elliptic_quadric(rank: int, field: Field) -> PolarSpace:
    return PolarSpace(PolarSpaceSpec("elliptic-quadric", rank, field))


def hermitian(field: Field, ambient_dim: int = 3) -> PolarSpace:
    return PolarSpace(PolarSpaceSpec("hermitian", 2, field, hermitian_ambient=ambient_dim))
