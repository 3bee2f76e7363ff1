"""Random generators shared by the property tests."""

import random
from fractions import Fraction

from gl2tv.field import FieldElement, Poly
from gl2tv.padic import Mat2


def random_poly(rng, q, max_terms=3, max_deg=2, allow_zero=True):
    while True:
        terms = {}
        for _ in range(rng.randint(1, max_terms)):
            key = (rng.randint(0, max_deg), rng.randint(0, max_deg), rng.randint(0, 1))
            terms[key] = terms.get(key, 0) + Fraction(rng.randint(-4, 4), rng.randint(1, 3))
        poly = Poly(q, terms)
        if allow_zero or not poly.is_zero():
            return poly


def random_element(rng, q, allow_zero=True):
    num = random_poly(rng, q, allow_zero=allow_zero)
    den = random_poly(rng, q, max_terms=2, allow_zero=False)
    return FieldElement(num, den)


def random_matrix(rng, p, spread=3):
    while True:
        entries = []
        for _ in range(4):
            if rng.random() < 0.15:
                entries.append(Fraction(0))
                continue
            num = rng.randint(-30, 30)
            den = rng.randint(1, 7) * p ** rng.randint(0, spread)
            entries.append(Fraction(num, den) * Fraction(p) ** rng.randint(0, spread))
        g = Mat2.of(p, *entries)
        if g.det():
            return g
