"""Exact 2x2 matrices over Q viewed inside GL2(Q_p).

Entries are plain :class:`fractions.Fraction` values; the prime travels with
the matrix.  This is enough for everything the verifier needs: valuations,
the Iwasawa factorisation g = b*k, congruence subgroups and finite models
of K = GL2(Z_p).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import inf
from typing import NamedTuple

__all__ = [
    "PadicScalar",
    "Mat2",
    "IwasawaPair",
    "valuation",
    "is_prime",
    "iwasawa",
    "new_vector_exponent",
    "in_K",
    "in_gamma0",
    "enumerate_k_mod",
    "gl2_order",
    "reduce_mod",
    "hecke_cosets",
    "in_hecke_double_coset",
    "hecke_coset_indices",
    "verify_hecke_decomposition",
    "gamma0_cosets",
    "gamma0_coset_indices",
    "verify_k_decomposition",
]


def is_prime(n):
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def _val_int(n, p):
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def valuation(x, p=None):
    """p-adic valuation of a nonzero rational (or PadicScalar)."""
    if isinstance(x, PadicScalar):
        p = x.prime
        x = x.value
    if p is None:
        raise TypeError("a prime is required for plain rationals")
    x = Fraction(x)
    if not x:
        raise ValueError("valuation of zero undefined")
    return _val_int(x.numerator, p) - _val_int(x.denominator, p)


def _val_or_inf(x, p):
    return valuation(x, p) if x else inf


@dataclass(frozen=True)
class PadicScalar:
    """A rational number regarded as an element of Q_p."""

    value: Fraction
    prime: int

    def __post_init__(self):
        object.__setattr__(self, "value", Fraction(self.value))

    def valuation(self):
        return valuation(self.value, self.prime)

    def is_integral(self):
        return self.value.denominator % self.prime != 0

    def residue(self, m=1):
        """Image in Z/p^m; requires an integral scalar."""
        if not self.is_integral():
            raise ValueError(f"{self.value} is not {self.prime}-integral")
        mod = self.prime ** m
        return self.value.numerator * pow(self.value.denominator, -1, mod) % mod

    def __mul__(self, other):
        return PadicScalar(self.value * other.value, self.prime)

    def __add__(self, other):
        return PadicScalar(self.value + other.value, self.prime)


@dataclass(frozen=True, slots=True)
class Mat2:
    """Row-major 2x2 rational matrix [[a, b], [c, d]] over Q_p."""

    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction
    p: int

    @classmethod
    def of(cls, p, a, b, c, d):
        return cls(Fraction(a), Fraction(b), Fraction(c), Fraction(d), p)

    @classmethod
    def identity(cls, p):
        return cls.of(p, 1, 0, 0, 1)

    @classmethod
    def parse(cls, text, p):
        """Parse ``"a,b;c,d"`` with entries ``num`` or ``num/den``."""
        rows = [r for r in text.strip().split(";")]
        if len(rows) != 2:
            raise ValueError(f"expected two rows separated by ';' in {text!r}")
        entries = []
        for row in rows:
            cols = row.split(",")
            if len(cols) != 2:
                raise ValueError(f"expected two comma-separated entries in row {row!r}")
            for col in cols:
                col = col.strip()
                try:
                    entries.append(Fraction(col))
                except (ValueError, ZeroDivisionError) as exc:
                    raise ValueError(f"bad matrix entry {col!r}") from exc
        return cls(*entries, p)

    def entries(self):
        return (self.a, self.b, self.c, self.d)

    def scalar(self, name):
        return PadicScalar(getattr(self, name), self.p)

    def det(self):
        return self.a * self.d - self.b * self.c

    def __matmul__(self, other):
        a, b, c, d = self.a, self.b, self.c, self.d
        e, f, g, h = other.a, other.b, other.c, other.d
        return Mat2(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h, self.p)

    def inverse(self):
        det = self.det()
        if not det:
            raise ValueError("singular matrix")
        return Mat2(self.d / det, -self.b / det, -self.c / det, self.a / det, self.p)

    def __str__(self):
        return "{},{};{},{}".format(*self.entries())


class IwasawaPair(NamedTuple):
    b: Mat2
    k: Mat2


def iwasawa(g):
    """Factor g = b*k with b upper triangular and k in GL2(Z_p).

    With (c, d) the bottom row of g: when val(d) <= val(c) the factor k is
    lower unipotent, otherwise k = [[0, -1], [1, d/c]].  A zero entry counts
    as valuation +infinity.
    """
    p = g.p
    det = g.det()
    if not det:
        raise ValueError("singular matrix has no Iwasawa decomposition")
    c, d = g.c, g.d
    zero, one = Fraction(0), Fraction(1)
    if _val_or_inf(d, p) <= _val_or_inf(c, p):
        b = Mat2(det / d, g.b, zero, d, p)
        k = Mat2(one, zero, c / d, one, p)
    else:
        b = Mat2(det / c, g.a, zero, c, p)
        k = Mat2(zero, -one, one, d / c, p)
    return IwasawaPair(b, k)


def new_vector_exponent(g):
    """val(x) - val(z) for the upper triangular part (x y; 0 z) of g."""
    b = iwasawa(g).b
    return valuation(b.a, g.p) - valuation(b.d, g.p)


def _integral(x, p):
    return x.denominator % p != 0


def in_K(k):
    p = k.p
    if not all(_integral(x, p) for x in k.entries()):
        return False
    det = k.det()
    return det != 0 and det.numerator % p != 0


def in_gamma0(k, n):
    """Membership in Gamma_0(p^n) = {k in K : val(c) >= n}."""
    if n < 0:
        raise ValueError("level n must be non-negative")
    if not in_K(k):
        return False
    return not k.c or valuation(k.c, k.p) >= n


def gl2_order(p, m=1):
    return (p * p - 1) * (p * p - p) * p ** (4 * (m - 1))


def reduce_mod(k, m):
    """Entries of an integral matrix reduced into {0, ..., p^m - 1}."""
    mod = k.p ** m
    out = []
    for x in k.entries():
        if x.denominator % k.p == 0:
            raise ValueError(f"matrix {k} is not {k.p}-integral")
        out.append(x.numerator * pow(x.denominator, -1, mod) % mod)
    return tuple(out)


def enumerate_k_mod(p, m):
    """One canonical integral lift of every element of GL2(Z/p^m).

    Lifts have entries in {0, ..., p^m - 1} and come out in lexicographic
    order of (a, b, c, d).
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    mod = p ** m
    out = []
    for a, b, c, d in product(range(mod), repeat=4):
        if (a * d - b * c) % p:
            out.append(Mat2(Fraction(a), Fraction(b), Fraction(c), Fraction(d), p))
    return out


def _default_taus(p, taus):
    return tuple(range(p)) if taus is None else tuple(taus)


def hecke_cosets(p, taus=None):
    """Left coset representatives of K diag(p, 1) K / K."""
    reps = [Mat2.of(p, p, t, 0, 1) for t in _default_taus(p, taus)]
    reps.append(Mat2.of(p, 0, 1, p, 0))
    return reps


def in_hecke_double_coset(g):
    """Elementary divisors (1, p): integral, val(det) = 1, primitive."""
    p = g.p
    if not all(_integral(x, p) for x in g.entries()):
        return False
    det = g.det()
    if not det or valuation(det, p) != 1:
        return False
    return any(x.numerator % p for x in g.entries())


def hecke_coset_indices(g, reps):
    return [i for i, r in enumerate(reps) if in_K(r.inverse() @ g)]


def verify_hecke_decomposition(p, taus=None, m=2):
    """Check the q+1 representatives split K diag(p,1) K into disjoint cosets.

    Disjointness is tested pairwise, and coverage exhaustively: every
    integral matrix mod p^m with val(det) = 1 and unimodular content must
    land in exactly one coset.
    """
    reps = hecke_cosets(p, taus)
    if len(reps) != p + 1:
        return False
    if not all(in_hecke_double_coset(r) for r in reps):
        return False
    for i, gi in enumerate(reps):
        for j, gj in enumerate(reps):
            if i != j and in_K(gi.inverse() @ gj):
                return False
    for g in _hecke_universe(p, m):
        if len(hecke_coset_indices(g, reps)) != 1:
            return False
    return True


def _hecke_universe(p, m):
    # val(det) = 1 is only visible modulo p^2
    if m < 2:
        raise ValueError("exhaustive Hecke check needs m >= 2")
    mod = p ** m
    for a, b, c, d in product(range(mod), repeat=4):
        det = (a * d - b * c) % (p * p)
        if det % p or not det:
            continue
        if not (a % p or b % p or c % p or d % p):
            continue
        yield Mat2(Fraction(a), Fraction(b), Fraction(c), Fraction(d), p)


def gamma0_cosets(p, taus=None):
    """Right-translate representatives g with K = disjoint union of g Gamma_0(p)."""
    reps = [Mat2.of(p, 1, 0, t, 1) for t in _default_taus(p, taus)]
    reps.append(Mat2.of(p, 0, 1, 1, 0))
    return reps


def gamma0_coset_indices(k, reps):
    return [i for i, r in enumerate(reps) if in_gamma0(r.inverse() @ k, 1)]


def verify_k_decomposition(p, taus=None):
    reps = gamma0_cosets(p, taus)
    if len(reps) != p + 1:
        return False
    return all(len(gamma0_coset_indices(k, reps)) == 1 for k in enumerate_k_mod(p, 1))
