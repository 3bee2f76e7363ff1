import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from gl2tv.padic import (
    Mat2,
    PadicScalar,
    enumerate_k_mod,
    gamma0_cosets,
    gl2_order,
    hecke_cosets,
    hecke_coset_indices,
    in_gamma0,
    in_hecke_double_coset,
    in_K,
    is_prime,
    iwasawa,
    new_vector_exponent,
    reduce_mod,
    valuation,
    verify_hecke_decomposition,
    verify_k_decomposition,
)
from helpers import random_matrix


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_valuation_of_uniformizer(p):
    assert valuation(p, p) == 1
    assert valuation(Fraction(1, p), p) == -1


def test_valuation_mixed():
    assert valuation(Fraction(18, 5), 3) == 2
    assert valuation(Fraction(5, 18), 2) == -1
    assert PadicScalar(Fraction(18, 5), 3).valuation() == 2


def test_valuation_zero():
    with pytest.raises(ValueError, match="valuation of zero undefined"):
        valuation(0, 3)


def test_scalar_residue():
    assert PadicScalar(Fraction(1, 2), 3).residue(2) == 5
    with pytest.raises(ValueError):
        PadicScalar(Fraction(1, 3), 3).residue()


def test_is_prime():
    assert [n for n in range(20) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19]


def test_iwasawa_identity():
    ident = Mat2.identity(3)
    b, k = iwasawa(ident)
    assert b == ident and k == ident


@pytest.mark.parametrize("p", [2, 3])
def test_iwasawa_round_trip_random(p):
    rng = random.Random(p)
    for _ in range(100):
        g = random_matrix(rng, p)
        b, k = iwasawa(g)
        assert b @ k == g
        assert b.c == 0
        assert in_K(k)


@settings(max_examples=200, deadline=None)
@given(
    st.sampled_from([2, 3, 5]),
    st.lists(st.fractions(max_denominator=50).filter(lambda x: abs(x) < 1000), min_size=4, max_size=4),
)
def test_iwasawa_property(p, entries):
    g = Mat2.of(p, *entries)
    if not g.det():
        with pytest.raises(ValueError):
            iwasawa(g)
        return
    b, k = iwasawa(g)
    assert b @ k == g and b.c == 0 and in_K(k)


@pytest.mark.parametrize("p", [2, 3])
def test_exponent_on_gamma_translates(p):
    gamma_inv = Mat2.of(p, Fraction(1, p), 0, 0, 1)
    for k in enumerate_k_mod(p, 1):
        b, _ = iwasawa(k @ gamma_inv)
        if k.c % p:
            assert (b.a, b.d) == (k.det() / k.c, k.c / p)
            assert new_vector_exponent(k @ gamma_inv) == 1
        else:
            assert b.a == k.det() / (p * k.d) and b.d == k.d
            assert new_vector_exponent(k @ gamma_inv) == -1


def test_membership_examples():
    ident, w = Mat2.identity(2), Mat2.of(2, 0, 1, 1, 0)
    assert in_gamma0(ident, 1)
    assert in_K(w) and not in_gamma0(w, 1)
    g = Mat2.of(3, 1, 0, 3, 1)
    assert in_gamma0(g, 1) and not in_gamma0(g, 2)
    assert not in_K(Mat2.of(3, Fraction(1, 3), 0, 0, 3))
    assert not in_K(Mat2.of(3, 3, 0, 0, 1))
    with pytest.raises(ValueError):
        in_gamma0(ident, -1)


@pytest.mark.parametrize("p,m,count", [(2, 1, 6), (3, 1, 48), (2, 2, 96)])
def test_enumeration_counts(p, m, count):
    ks = enumerate_k_mod(p, m)
    assert len(ks) == count == gl2_order(p, m)
    assert len({reduce_mod(k, m) for k in ks}) == count


def test_membership_depends_only_on_class():
    rng = random.Random(0)
    for k in enumerate_k_mod(2, 2):
        lift = Mat2.of(2, *(x + 4 * rng.randint(-3, 3) for x in k.entries()))
        assert in_K(lift)
        assert in_gamma0(lift, 1) == in_gamma0(k, 1)
        assert in_gamma0(lift, 2) == in_gamma0(k, 2)


@pytest.mark.parametrize("p", [2, 3])
def test_hecke_decomposition(p):
    reps = hecke_cosets(p)
    assert len(reps) == p + 1
    assert all(in_hecke_double_coset(r) for r in reps)
    assert hecke_coset_indices(reps[0], reps) == [0]
    assert verify_hecke_decomposition(p)


def test_hecke_shifted_residues():
    assert verify_hecke_decomposition(3, taus=(1, 2, 3))


def test_hecke_rejects_duplicate():
    assert not verify_hecke_decomposition(3, taus=(0, 1, 1))


@pytest.mark.parametrize("p", [2, 3])
def test_k_decomposition(p):
    assert len(gamma0_cosets(p)) == p + 1
    assert verify_k_decomposition(p)


def test_parse_and_render():
    g = Mat2.parse("1/2, 3; -4, 5/9", 3)
    assert g == Mat2.of(3, Fraction(1, 2), 3, -4, Fraction(5, 9))
    assert str(g) == "1/2,3;-4,5/9"
    for bad in ["1,2,3;4,5", "1,2", "a,b;c,d", "1/0,1;1,1"]:
        with pytest.raises(ValueError):
            Mat2.parse(bad, 3)
