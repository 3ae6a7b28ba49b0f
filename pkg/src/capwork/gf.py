"""Exact arithmetic in GF(p^e).

Elements are plain integers in [0, q): the integer encodes the coefficient
vector of the residue polynomial in base p, constant term least significant.
This makes element ordering, hashing and point indexing deterministic.

Moduli are chosen deterministically: the lexicographically least monic
irreducible polynomial of degree e over GF(p), comparing coefficient vectors
from the x^(e-1) coefficient down. Extension fields are supported up to
order 1024; bigger prime fields are allowed up to the global order guard.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .errors import (
    DivisionByZeroError,
    NotPrimeError,
    NotSquareOrderError,
    UnsupportedFieldError,
)

ORDER_GUARD = 1 << 20
EXTENSION_LIMIT = 1024


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


# --- polynomial helpers over GF(p); polys are tuples of ints, ascending degree,
# --- no trailing zeros (the zero polynomial is the empty tuple).


def _trim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _poly_add(a, b, p):
    n = max(len(a), len(b))
    return _trim(
        ((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % p for i in range(n)
    )


def _poly_mul(a, b, p):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _trim(out)


def _poly_mod(a, m, p):
    # m monic
    a = list(a)
    dm = len(m) - 1
    while len(a) - 1 >= dm and a:
        lead = a[-1]
        if lead:
            shift = len(a) - 1 - dm
            for i in range(dm):
                a[shift + i] = (a[shift + i] - lead * m[i]) % p
        a.pop()
    return _trim(a)


def _poly_pow_mod(a, k, m, p):
    result = (1,)
    base = _poly_mod(a, m, p)
    while k:
        if k & 1:
            result = _poly_mod(_poly_mul(result, base, p), m, p)
        base = _poly_mod(_poly_mul(base, base, p), m, p)
        k >>= 1
    return result


def _poly_gcd(a, b, p):
    while b:
        # reduce a mod b after making b monic
        inv_lead = pow(b[-1], p - 2, p)
        bm = tuple((c * inv_lead) % p for c in b)
        a, b = b, _poly_mod(a, bm, p)
    return a


def _has_root(coeffs, p):
    for x in range(p):
        acc = 0
        for c in reversed(coeffs):
            acc = (acc * x + c) % p
        if acc == 0:
            return True
    return False


def _is_irreducible(coeffs, p):
    """Monic polynomial irreducibility over GF(p).

    Degree <= 3 reduces to a root check; otherwise Rabin's test:
    x^(p^e) == x mod f together with gcd(x^(p^(e/l)) - x, f) = 1 for
    every prime l dividing e.
    """
    e = len(coeffs) - 1
    if e <= 0:
        return False
    if e == 1:
        return True
    if e <= 3:
        return not _has_root(coeffs, p)
    x = (0, 1)

    def frob_iter(k):
        # x^(p^k) mod f by k-fold Frobenius
        t = x
        for _ in range(k):
            t = _poly_pow_mod(t, p, coeffs, p)
        return t

    if _trim(frob_iter(e)) != x:
        return False
    primes = set()
    m = e
    f = 2
    while f * f <= m:
        while m % f == 0:
            primes.add(f)
            m //= f
        f += 1
    if m > 1:
        primes.add(m)
    for ell in primes:
        t = frob_iter(e // ell)
        diff = _poly_add(t, tuple((-c) % p for c in x), p)
        g = _poly_gcd(coeffs, diff, p)
        if len(g) - 1 >= 1:
            return False
    return True


@lru_cache(maxsize=None)
def minimal_irreducible(p: int, e: int) -> tuple:
    """Lexicographically least monic irreducible of degree e over GF(p).

    Candidates are ordered by the integer encoding of the non-leading
    coefficients in base p (x^(e-1) coefficient most significant).
    """
    for enc in range(p**e):
        coeffs = []
        v = enc
        for _ in range(e):
            coeffs.append(v % p)
            v //= p
        coeffs.append(1)  # monic
        coeffs = tuple(coeffs)
        if _is_irreducible(coeffs, p):
            return coeffs
    raise UnsupportedFieldError(f"no irreducible polynomial found for GF({p}^{e})")


class Field:
    """Immutable GF(p^e) arithmetic context; all operations are pure."""

    __slots__ = ("p", "e", "q", "modulus", "_xpow", "_tables")

    def __init__(self, p: int, e: int, modulus: tuple):
        self.p = p
        self.e = e
        self.q = p**e
        self.modulus = modulus
        # reductions of x^k for k in [e, 2e-2], as encoded ints
        xpow = []
        if e > 1:
            poly = _poly_mod((0,) * e + (1,), modulus, p)
            for _ in range(e - 1):
                xpow.append(self._encode(poly))
                poly = _poly_mod(_poly_mul(poly, (0, 1), p), modulus, p)
        self._xpow = tuple(xpow)
        self._tables = None

    def __repr__(self):
        return f"GF({self.q})"

    def __reduce__(self):
        return (make_field, (self.p, self.e))

    # -- encoding helpers

    def _decode(self, a: int):
        coeffs = []
        for _ in range(self.e):
            coeffs.append(a % self.p)
            a //= self.p
        return coeffs

    def _encode(self, coeffs) -> int:
        cs = list(coeffs[: self.e])
        cs += [0] * (self.e - len(cs))
        v = 0
        for c in reversed(cs):
            v = v * self.p + c
        return v

    def check(self, a: int):
        if not 0 <= a < self.q:
            raise ValueError(f"{a} is not an element of {self}")

    def elements(self):
        return range(self.q)

    # -- arithmetic

    def add(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a + b) % self.p
        p = self.p
        v = 0
        mul = 1
        while a or b:
            v += ((a % p + b % p) % p) * mul
            a //= p
            b //= p
            mul *= p
        return v

    def neg(self, a: int) -> int:
        if self.e == 1:
            return (-a) % self.p
        p = self.p
        v = 0
        mul = 1
        while a:
            v += ((p - a % p) % p) * mul
            a //= p
            mul *= p
        return v

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a * b) % self.p
        pa = self._decode(a)
        pb = self._decode(b)
        prod = _poly_mul(_trim(pa), _trim(pb), self.p)
        # reduce degrees >= e through the precomputed x^k images
        acc = list(prod[: self.e]) + [0] * max(0, self.e - len(prod))
        for k in range(self.e, len(prod)):
            if prod[k]:
                img = self._decode(self._xpow[k - self.e])
                for i in range(self.e):
                    acc[i] = (acc[i] + prod[k] * img[i]) % self.p
        return self._encode(tuple(acc))

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZeroError("inverse of 0")
        if self.e == 1:
            return pow(a, self.p - 2, self.p)
        return self.pow(a, self.q - 2)

    def pow(self, a: int, k: int) -> int:
        result = 1
        base = a
        k = int(k)
        if k < 0:
            base = self.inv(a)
            k = -k
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def conjugate(self, a: int) -> int:
        """Frobenius involution a -> a^s on a field of square order s^2."""
        if self.e % 2 != 0:
            raise NotSquareOrderError(f"{self} has no square order: q = {self.p}^{self.e}")
        s = self.p ** (self.e // 2)
        return self.pow(a, s)

    # -- dense operation tables for vectorized geometry / kernels

    def tables(self):
        """(add, mul, inv, neg) as int32 numpy arrays; inv[0] = 0 sentinel."""
        if self._tables is None:
            q = self.q
            if q > 2048:
                raise UnsupportedFieldError(f"operation tables limited to q <= 2048, got {q}")
            add = np.empty((q, q), dtype=np.int32)
            mul = np.empty((q, q), dtype=np.int32)
            for a in range(q):
                for b in range(a, q):
                    s = self.add(a, b)
                    m = self.mul(a, b)
                    add[a, b] = add[b, a] = s
                    mul[a, b] = mul[b, a] = m
            inv = np.zeros(q, dtype=np.int32)
            for a in range(1, q):
                inv[a] = self.inv(a)
            neg = np.array([self.neg(a) for a in range(q)], dtype=np.int32)
            add.setflags(write=False)
            mul.setflags(write=False)
            inv.setflags(write=False)
            neg.setflags(write=False)
            self._tables = (add, mul, inv, neg)
        return self._tables


@lru_cache(maxsize=None)
def make_field(p: int, e: int = 1) -> Field:
    """Field of order p^e with the deterministic built-in modulus."""
    if p < 2 or e < 1:
        raise UnsupportedFieldError(f"need p >= 2 and e >= 1, got p={p}, e={e}")
    if not is_prime(p):
        raise NotPrimeError(f"{p} is not prime")
    q = p**e
    if q > ORDER_GUARD:
        raise UnsupportedFieldError(f"order {q} exceeds guard {ORDER_GUARD}")
    if e == 1:
        return Field(p, 1, (0, 1))
    if q > EXTENSION_LIMIT:
        raise UnsupportedFieldError(
            f"no built-in modulus for GF({p}^{e}); extension fields stop at order {EXTENSION_LIMIT}"
        )
    return Field(p, e, minimal_irreducible(p, e))


def field_of_order(q: int) -> Field:
    """Factor q = p^e and build the field; rejects non prime powers."""
    from .errors import UsageError

    if q < 2:
        raise UsageError(f"{q} is not a prime power")
    p = q
    for f in range(2, q + 1):
        if f * f > q:
            break
        if q % f == 0:
            p = f
            break
    e = 0
    m = q
    while m % p == 0:
        m //= p
        e += 1
    if m != 1:
        raise UsageError(f"{q} is not a prime power")
    return make_field(p, e)
