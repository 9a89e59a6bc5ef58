import random

import pytest
from gmpy2 import mpq

from modsym.fields import (
    QQ,
    ExtensionField,
    FieldError,
    PrimeField,
    field_from_json,
    parse_field,
)
from modsym.poly import Poly, make_extension

FIELDS = [
    QQ,
    PrimeField(5),
    PrimeField(101),
    make_extension(PrimeField(5), Poly(PrimeField(5), [2, 0, 1])),
    make_extension(QQ, Poly(QQ, [-1, 1, 1])),
]


@pytest.mark.parametrize("F", FIELDS, ids=repr)
def test_field_axioms_random(F):
    rng = random.Random(7)
    for _ in range(1000):
        a, b, c = (F.random_element(rng) for _ in range(3))
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a + b == b + a and a * b == b * a
        assert a - a == F.zero
        if a != F.zero:
            assert a * (F.one / a) == F.one


def test_rationals_reduced():
    x = QQ("6/8")
    assert x == mpq(3, 4)
    assert QQ.format(x) == "3/4"
    assert QQ.format(QQ(-2)) == "-2"


def test_prime_field_reduction_and_equality():
    F = PrimeField(7)
    assert F(10) == F(3)
    assert int(F(-1)) == 6
    assert F(3) * F(5) == F(1)
    with pytest.raises(FieldError):
        F(1) + PrimeField(5)(1)


def test_extension_example_golden_ratio_field():
    K = make_extension(QQ, Poly(QQ, [-1, 1, 1]))
    x = K.gen()
    assert x * x == K([1, -1])


def test_extension_fp25_has_no_zero_divisors():
    # -2 is a non-residue mod 5, so x^2 + 2 is irreducible
    F = PrimeField(5)
    assert all((a * a + 2) % 5 for a in range(5))
    K = make_extension(F, Poly(F, [2, 0, 1]))
    elems = [K([a, b]) for a in range(5) for b in range(5)]
    assert K.order() == 25
    for a in elems[1:]:
        assert any(a * b == K.one for b in elems)


def test_reducible_modulus_rejected():
    with pytest.raises(FieldError, match="reducible"):
        make_extension(QQ, Poly(QQ, [-1, 0, 1]))


def test_nonmonic_modulus_rejected():
    with pytest.raises(FieldError):
        ExtensionField(QQ, [1, 0, 2])


@pytest.mark.parametrize("F", FIELDS, ids=repr)
def test_json_roundtrip(F):
    assert field_from_json(F.to_json()) == F


def test_parse_field():
    assert parse_field("q") == QQ
    assert parse_field("fp:7") == PrimeField(7)
    with pytest.raises(FieldError):
        parse_field("fp:8")
