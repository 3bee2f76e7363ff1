"""Unramified principal series of GL2(Q_p): new vectors and their translates.

Functions in the induced model satisfy f(b g) = chi(b) delta(b)^(1/2) f(g)
and G acts by right translation, <pi(h), f>(g) = f(g h).  The new vector
v_chi is normalised by v_chi(1) = 1, so with g = (x y; 0 z) k its value is
(chi(p)/sqrt q)^(val x - val z).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache

from .field import FieldElement, gens, int_pow
from .padic import Mat2, in_K, iwasawa, new_vector_exponent, valuation

__all__ = [
    "UnramifiedCharacter",
    "MU1",
    "MU2",
    "EvalContext",
    "GroupAlgebraElement",
    "eval_new_vector",
    "eval_v2star",
    "eval_tensor",
    "eval_pair",
    "restrict_to_little_f",
    "v2star_exponent",
]


@dataclass(frozen=True)
class UnramifiedCharacter:
    """Character of the Borel, (a b; 0 d) -> mu(a/d), with mu trivial on units.

    ``symbol`` names the formal variable carrying mu(p): "X" or "Y".
    """

    symbol: str

    def __post_init__(self):
        if self.symbol not in ("X", "Y"):
            raise ValueError(f"unknown character symbol {self.symbol!r}")

    def power(self, q, e):
        """(mu(p)/sqrt q)^e, the value of chi * delta^(1/2) on val-difference e."""
        return _base_power(self.symbol, q, e)


@lru_cache(maxsize=None)
def _base_power(symbol, q, e):
    X, Y, S = gens(q)
    base = (X if symbol == "X" else Y) / S
    return int_pow(base, e)


MU1 = UnramifiedCharacter("X")
MU2 = UnramifiedCharacter("Y")


@dataclass(frozen=True)
class EvalContext:
    """Prime p (so q = p), conductor exponent n and residue representatives."""

    p: int
    n: int = 1
    taus: tuple = field(default=None)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("conductor exponent n must be >= 1")
        taus = tuple(range(self.p)) if self.taus is None else tuple(self.taus)
        if sorted(t % self.p for t in taus) != list(range(self.p)):
            raise ValueError(f"{taus} is not a set of residues mod {self.p}")
        object.__setattr__(self, "taus", taus)

    @property
    def q(self):
        return self.p

    @cached_property
    def gamma(self):
        return Mat2.of(self.p, self.p ** self.n, 0, 0, 1)

    @cached_property
    def gamma_inv(self):
        return Mat2.of(self.p, Fraction(1, self.p ** self.n), 0, 0, 1)

    @cached_property
    def w(self):
        return Mat2.of(self.p, 0, 1, 1, 0)

    def gens(self):
        return gens(self.q)


@dataclass(frozen=True, eq=False)
class GroupAlgebraElement:
    """Formal sum of (coefficient, matrix) terms acting on v1 (x) v2*."""

    terms: tuple

    def __post_init__(self):
        terms = tuple((c, g) for c, g in self.terms)
        for _, g in terms:
            if not g.det():
                raise ValueError(f"singular translate {g}")
        object.__setattr__(self, "terms", terms)

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    @property
    def coefficients(self):
        return [c for c, _ in self.terms]

    @property
    def translates(self):
        return [g for _, g in self.terms]

    def __add__(self, other):
        return GroupAlgebraElement(self.terms + other.terms)

    def scaled(self, c):
        return GroupAlgebraElement(tuple((c * a, g) for a, g in self.terms))

    def left_translate(self, h):
        """The element h * (sum a_i g_i) = sum a_i (h g_i)."""
        return GroupAlgebraElement(tuple((a, h @ g) for a, g in self.terms))

    def with_coefficients(self, coeffs):
        coeffs = list(coeffs)
        if len(coeffs) != len(self.terms):
            raise ValueError("coefficient count does not match term count")
        return GroupAlgebraElement(tuple(zip(coeffs, self.translates)))


def eval_new_vector(chi, g):
    """v_chi(g) for the normalised unramified new vector."""
    return chi.power(g.p, new_vector_exponent(g))


def v2star_exponent(g, ctx):
    return new_vector_exponent(g @ ctx.gamma_inv)


def eval_v2star(g, ctx):
    """v2*(g) = v2(g gamma^-1)."""
    return eval_new_vector(MU2, g @ ctx.gamma_inv)


def eval_pair(elem, g, g_prime, ctx):
    """sum_i a_i v1(g g_i) v2*(g' g_i) for arbitrary invertible g, g'."""
    total = FieldElement.const(ctx.q, 0)
    for a, h in elem.terms:
        total = total + a * eval_new_vector(MU1, g @ h) * eval_v2star(g_prime @ h, ctx)
    return total


def eval_tensor(elem, k, k_prime, ctx):
    """Value of sum a_i <(pi1 x pi2)(g_i), v1 (x) v2*> at (k, k') in K x K."""
    for name, m in (("k", k), ("k'", k_prime)):
        if not in_K(m):
            raise ValueError(f"{name} = {m} is not in K")
    return eval_pair(elem, k, k_prime, ctx)


def _borel_factor(chi, b):
    return chi.power(b.p, valuation(b.a, b.p) - valuation(b.d, b.p))


def restrict_to_little_f(elem, g, ctx):
    """f(g) = F(g, w g), evaluated through the B x B-equivariant extension."""
    b1, k1 = iwasawa(g)
    b2, k2 = iwasawa(ctx.w @ g)
    return _borel_factor(MU1, b1) * _borel_factor(MU2, b2) * eval_tensor(elem, k1, k2, ctx)
