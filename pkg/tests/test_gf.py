import itertools

import pytest

from capwork.errors import (
    DivisionByZeroError,
    NotPrimeError,
    NotSquareOrderError,
    UnsupportedFieldError,
)
from capwork.gf import field_of_order, is_prime, make_field, minimal_irreducible


def test_prime_field_basics():
    F = make_field(2)
    assert list(F.elements()) == [0, 1]
    assert F.add(1, 1) == 0
    F5 = make_field(5)
    assert F5.inv(2) == 3


def test_gf9_modulus_is_x2_plus_1():
    # exhaustive root check over the 9 monic quadratics puts x^2+1 first
    assert make_field(3, 2).modulus == (1, 0, 1)


def test_gf4_product_example():
    F = make_field(2, 2)
    assert F.modulus == (1, 1, 1)
    x, x_plus_1 = 2, 3
    assert F.mul(x, x_plus_1) == 1


def test_composite_p_rejected():
    with pytest.raises(NotPrimeError):
        make_field(4, 1)


def test_inv_zero_raises():
    with pytest.raises(DivisionByZeroError):
        make_field(7).inv(0)


def test_order_guards():
    with pytest.raises(UnsupportedFieldError):
        make_field(2, 21)  # 2^21 over the order guard
    with pytest.raises(UnsupportedFieldError):
        make_field(2, 11)  # 2048 > extension table limit


@pytest.mark.parametrize("p,e", [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (3, 2), (2, 3), (2, 4), (2, 5), (2, 6)])
def test_field_axioms_exhaustive(p, e):
    # full associativity/commutativity/distributivity for q <= 64
    F = make_field(p, e)
    assert F.q <= 64
    els = range(F.q)
    for a, b, c in itertools.product(els, repeat=3):
        assert F.mul(a, F.mul(b, c)) == F.mul(F.mul(a, b), c)
        assert F.add(a, F.add(b, c)) == F.add(F.add(a, b), c)
        assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    for a, b in itertools.product(els, repeat=2):
        assert F.mul(a, b) == F.mul(b, a)
        assert F.add(a, b) == F.add(b, a)
    for a in els:
        assert F.add(a, 0) == a
        assert F.mul(a, 1) == a
        assert F.add(a, F.neg(a)) == 0
        if a:
            assert F.mul(a, F.inv(a)) == 1


@pytest.mark.parametrize("p,e", [(2, 2), (3, 2), (2, 4), (5, 2), (7, 2), (2, 6), (3, 4)])
def test_conjugate_involutive_automorphism(p, e):
    F = make_field(p, e)
    assert F.q <= 81
    s = p ** (e // 2)
    for a in range(F.q):
        assert F.conjugate(F.conjugate(a)) == a
    for a, b in itertools.product(range(F.q), repeat=2):
        assert F.conjugate(F.mul(a, b)) == F.mul(F.conjugate(a), F.conjugate(b))
        assert F.conjugate(F.add(a, b)) == F.add(F.conjugate(a), F.conjugate(b))
    # fixed field is the subfield of order s
    fixed = [a for a in range(F.q) if F.conjugate(a) == a]
    assert len(fixed) == s


def test_conjugate_examples():
    F4 = make_field(2, 2)
    assert F4.conjugate(2) == 3  # x -> x^2 = x + 1
    assert make_field(3, 2).conjugate(1) == 1
    with pytest.raises(NotSquareOrderError):
        make_field(2, 3).conjugate(3)


def test_minimal_irreducible_is_irreducible_and_least():
    for p, e in [(2, 2), (2, 3), (2, 4), (2, 8), (3, 3), (5, 2), (2, 10)]:
        coeffs = minimal_irreducible(p, e)
        assert len(coeffs) == e + 1 and coeffs[-1] == 1
        # no roots (necessary for any degree)
        for x in range(p):
            acc = 0
            for c in reversed(coeffs):
                acc = (acc * x + c) % p
            assert acc != 0


def test_tables_match_scalar_ops():
    F = make_field(3, 2)
    add, mul, inv, neg = F.tables()
    for a in range(9):
        for b in range(9):
            assert add[a, b] == F.add(a, b)
            assert mul[a, b] == F.mul(a, b)
        assert neg[a] == F.neg(a)
        if a:
            assert inv[a] == F.inv(a)


def test_field_of_order():
    assert field_of_order(9).q == 9
    assert field_of_order(31).p == 31
    from capwork.errors import UsageError

    with pytest.raises(UsageError):
        field_of_order(6)


def test_is_prime_small():
    primes = [p for p in range(50) if is_prime(p)]
    assert primes == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]
