import random
from fractions import Fraction

import pytest

from gl2tv.field import FieldElement, Poly, QuadraticNumber, SpecializationPole, exact_divide, gens, specialize
from gl2tv.verifier import coefficient_A
from helpers import random_element, random_poly


@pytest.fixture
def xys():
    return gens(2)


def test_s_squared(xys):
    _, _, S = xys
    assert S * S == FieldElement.const(2, 2)
    assert str(S * S) == "(2)/(1)"


def test_principality_gap(xys):
    X, _, S = xys
    assert not (X / S - S / X).is_zero()


def test_constant_identity(xys):
    X, _, S = xys
    assert 2 * (X / S) + S / X == (S / X) * (1 + X * X)


def test_ratio_inverse(xys):
    X, Y, _ = xys
    assert (X / Y) * (Y / X) == 1


def test_zero_denominator(xys):
    X, _, _ = xys
    with pytest.raises(ZeroDivisionError, match="zero denominator"):
        X / (X - X)
    with pytest.raises(ZeroDivisionError, match="zero denominator"):
        FieldElement.const(2, 0).inverse()


def test_equality_by_cross_multiplication(xys):
    X, Y, _ = xys
    a = FieldElement(((X + Y) * (X - Y)).num, (X + Y).num)
    assert a == X - Y


@pytest.mark.parametrize("k", range(0, 6))
def test_s_power_reduction(k):
    poly = Poly(3, {(0, 0, 2 * k): Fraction(1)})
    assert poly == Poly.const(3, 3 ** k)
    odd = Poly(3, {(1, 0, 2 * k + 1): Fraction(1)})
    assert odd == Poly.monomial(3, 1, 0, 1, 3 ** k)


@pytest.mark.parametrize("q", [2, 3])
def test_field_axioms_random(q):
    rng = random.Random(q)
    one, zero = FieldElement.const(q, 1), FieldElement.const(q, 0)
    for _ in range(150):
        a, b, c = (random_element(rng, q) for _ in range(3))
        assert (a + b) + c == a + (b + c)
        assert a + b == b + a
        assert (a * b) * c == a * (b * c)
        assert a * b == b * a
        assert a * (b + c) == a * b + a * c
        assert a + zero == a and a * one == a
        assert a - a == zero
        if not a.is_zero():
            assert a * a.inverse() == one
            assert (b / a) * a == b


def test_canonicalization_idempotent():
    rng = random.Random(7)
    for _ in range(200):
        a = random_element(rng, 3)
        once = a.normalized()
        twice = once.normalized()
        assert str(once) == str(twice)
        assert once == a


def test_exact_divide():
    rng = random.Random(3)
    for _ in range(100):
        a = random_poly(rng, 2)
        b = random_poly(rng, 2, allow_zero=False)
        assert exact_divide(a * b, b) == a
    X = Poly.monomial(2, 1)
    assert exact_divide(X + Poly.const(2, 1), X) is None


def test_int_pow(xys):
    X, Y, S = xys
    assert (Y / S) ** -1 == S / Y
    assert str((Y / S) ** -1) == "(S)/(Y)"
    assert (X / Y) ** 3 * (X / Y) ** -3 == 1
    assert (X / Y) ** 0 == 1


def test_rendering(xys):
    X, Y, S = xys
    assert str(S / Y) == "(S)/(Y)"
    assert str(Y / S) == "(Y)/(S)"
    assert str(S / X * (1 + X * X)) == "(S + X^2*S)/(X)"


def test_specialize_simple(xys):
    _, Y, S = xys
    assert specialize(S / Y, 5, 1) == QuadraticNumber(0, 1, 2)


def test_specialize_A_by_hand():
    # ((1/sqrt2 - sqrt2)(2/sqrt2 - sqrt2/2))^-1, rewritten over Q(sqrt 2)
    r = QuadraticNumber(0, 1, 2)
    expected = ((1 / r - r) * (2 / r - r / 2)).inverse()
    assert specialize(coefficient_A(2), 1, 2) == expected
    assert expected == QuadraticNumber(-2, 0, 2)


def test_specialize_poles(xys):
    X, Y, S = xys
    with pytest.raises(SpecializationPole, match="X\\^2 = q"):
        specialize(coefficient_A(2), QuadraticNumber(0, 1, 2), 1)
    with pytest.raises(SpecializationPole, match="Y\\^2 = q"):
        specialize(coefficient_A(3), 1, QuadraticNumber(0, -1, 3))
    with pytest.raises(SpecializationPole, match="Y = 0"):
        specialize(S / Y, 1, 0)


def test_specialize_rejects_complex(xys):
    X, _, _ = xys
    with pytest.raises(TypeError):
        specialize(1 / (1 + X * X), 1j, 1)


def test_quadratic_arithmetic():
    r = QuadraticNumber(0, 1, 3)
    assert r * r == 3
    assert (1 + r) * (1 - r) == -2
    assert (1 + r) / (1 + r) == 1
