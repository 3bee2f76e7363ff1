"""Exact arithmetic in Q(sqrt q)(X, Y).

X and Y stand for the values of two unramified characters at the
uniformizer, S for sqrt(q).  Polynomials are stored as dictionaries mapping
exponent triples ``(a, b, e)`` to rational coefficients, with ``e`` in
``{0, 1}`` after reducing by ``S^2 = q``.  Fractions are not reduced by a
polynomial gcd; equality is decided by cross-multiplication, and a cheap
cancellation pass (shared monomials, rational content, exact division)
keeps sizes small.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm
from numbers import Rational

__all__ = [
    "Poly",
    "FieldElement",
    "QuadraticNumber",
    "SpecializationPole",
    "gens",
    "specialize",
]


def _reduce_terms(q, items):
    out = {}
    for (a, b, e), c in items:
        if e > 1:
            c = c * q ** (e // 2)
            e = e % 2
        key = (a, b, e)
        out[key] = out.get(key, 0) + c
    return {k: Fraction(v) for k, v in out.items() if v}


class Poly:
    """Polynomial in X, Y, S over Q with S^2 = q."""

    __slots__ = ("q", "terms")

    def __init__(self, q, terms=None, *, _canonical=False):
        self.q = q
        if terms is None:
            self.terms = {}
        elif _canonical:
            self.terms = terms
        else:
            self.terms = _reduce_terms(q, terms.items())

    @classmethod
    def const(cls, q, c):
        c = Fraction(c)
        return cls(q, {(0, 0, 0): c} if c else {}, _canonical=True)

    @classmethod
    def monomial(cls, q, a=0, b=0, e=0, coeff=1):
        return cls(q, {(a, b, e): Fraction(coeff)})

    def is_zero(self):
        return not self.terms

    def is_one(self):
        return self.terms == {(0, 0, 0): 1}

    def is_constant(self):
        return not self.terms or list(self.terms) == [(0, 0, 0)]

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.q == other.q and self.terms == other.terms

    def __hash__(self):
        return hash((self.q, frozenset(self.terms.items())))

    def _check(self, other):
        if self.q != other.q:
            raise ValueError(f"mixing q={self.q} and q={other.q}")

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            v = out.get(k, 0) + c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return Poly(self.q, out, _canonical=True)

    def __neg__(self):
        return Poly(self.q, {k: -c for k, c in self.terms.items()}, _canonical=True)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        self._check(other)
        q = self.q
        out = {}
        for (a1, b1, e1), c1 in self.terms.items():
            for (a2, b2, e2), c2 in other.terms.items():
                c = c1 * c2
                e = e1 + e2
                if e == 2:
                    c *= q
                    e = 0
                key = (a1 + a2, b1 + b2, e)
                out[key] = out.get(key, 0) + c
        return Poly(q, {k: v for k, v in out.items() if v}, _canonical=True)

    def scale(self, c):
        c = Fraction(c)
        if not c:
            return Poly(self.q)
        return Poly(self.q, {k: v * c for k, v in self.terms.items()}, _canonical=True)

    def conjugate(self):
        """Image under S -> -S."""
        return Poly(
            self.q,
            {k: (-c if k[2] else c) for k, c in self.terms.items()},
            _canonical=True,
        )

    def leading(self):
        k = max(self.terms)
        return k, self.terms[k]

    def degree(self):
        return max((a + b for a, b, _ in self.terms), default=-1)

    def evaluate(self, x, y):
        """Substitute X := x, Y := y (QuadraticNumbers) and S := sqrt(q)."""
        q = self.q
        s = QuadraticNumber(0, 1, q)
        total = QuadraticNumber(0, 0, q)
        for (a, b, e), c in self.terms.items():
            total = total + (x ** a) * (y ** b) * (s ** e) * c
        return total

    def render(self):
        if not self.terms:
            return "0"
        parts = []
        for key in sorted(self.terms):
            c = self.terms[key]
            names = []
            for name, power in zip("XYS", key):
                if power == 1:
                    names.append(name)
                elif power > 1:
                    names.append(f"{name}^{power}")
            mono = "*".join(names)
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(("+ " if c > 0 else "- ") + body)
        return " ".join(parts)

    def __repr__(self):
        return f"Poly({self.render()!r}, q={self.q})"


# -- exact division ---------------------------------------------------------


def _split(poly):
    """Split into S-free parts (P0, P1) with poly = P0 + S*P1."""
    p0, p1 = {}, {}
    for (a, b, e), c in poly.terms.items():
        (p1 if e else p0)[(a, b)] = c
    return p0, p1


def _divide_xy(num, den):
    """Exact division in Q[X, Y] (dicts keyed by (a, b)); None if inexact."""
    if not num:
        return {}
    lk = max(den)
    lc = den[lk]
    rem = dict(num)
    quo = {}
    while rem:
        k = max(rem)
        if k[0] < lk[0] or k[1] < lk[1]:
            return None
        shift = (k[0] - lk[0], k[1] - lk[1])
        c = rem[k] / lc
        quo[shift] = c
        for (a, b), d in den.items():
            key = (a + shift[0], b + shift[1])
            v = rem.get(key, 0) - c * d
            if v:
                rem[key] = v
            else:
                rem.pop(key, None)
    return quo


def exact_divide(num, den):
    """Return num/den as a Poly when den divides num exactly, else None."""
    num._check(den)
    if den.is_zero():
        raise ZeroDivisionError("zero denominator")
    if num.is_zero():
        return Poly(num.q)
    q = num.q
    if len(den.terms) == 1:
        ((a0, b0, e0), c0), = den.terms.items()
        out = {}
        for (a, b, e), c in num.terms.items():
            if a < a0 or b < b0:
                return None
            c = c / c0
            if e0:
                # x / S = x * S / q
                e += 1
                c = c / q
            out[(a - a0, b - b0, e)] = c
        return Poly(q, out)
    dbar = den.conjugate()
    norm0, norm1 = _split(den * dbar)
    assert not norm1
    n0, n1 = _split(num * dbar)
    q0 = _divide_xy(n0, norm0)
    if q0 is None:
        return None
    q1 = _divide_xy(n1, norm0)
    if q1 is None:
        return None
    terms = {(a, b, 0): c for (a, b), c in q0.items()}
    terms.update({(a, b, 1): c for (a, b), c in q1.items()})
    return Poly(q, terms, _canonical=True)


# -- fractions --------------------------------------------------------------


def _strip(num, den):
    """Remove shared monomials and normalise rational content."""
    keys = list(num.terms) + list(den.terms)
    ma = min(k[0] for k in keys)
    mb = min(k[1] for k in keys)
    me = min(k[2] for k in keys)
    if ma or mb or me:
        num = Poly(num.q, {(a - ma, b - mb, e - me): c for (a, b, e), c in num.terms.items()}, _canonical=True)
        den = Poly(den.q, {(a - ma, b - mb, e - me): c for (a, b, e), c in den.terms.items()}, _canonical=True)
    coeffs = list(den.terms.values())
    scale = Fraction(lcm(*(c.denominator for c in coeffs)), gcd(*(c.numerator for c in coeffs)))
    if den.leading()[1] < 0:
        scale = -scale
    if scale != 1:
        num = num.scale(scale)
        den = den.scale(scale)
    return num, den


class FieldElement:
    """Element num/den of Q(sqrt q)(X, Y).

    Instances are immutable.  ``==`` is mathematical equality (decided by
    cross-multiplication), so FieldElements are deliberately unhashable.
    """

    __slots__ = ("num", "den")
    __hash__ = None

    def __init__(self, num, den=None, *, _normalized=False):
        if den is None:
            den = Poly.const(num.q, 1)
        num._check(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if not _normalized:
            num, den = _normalize(num, den)
        self.num = num
        self.den = den

    @property
    def q(self):
        return self.num.q

    @classmethod
    def const(cls, q, c):
        return cls(Poly.const(q, c), Poly.const(q, 1), _normalized=True)

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.q != self.q:
                raise ValueError(f"mixing q={self.q} and q={other.q}")
            return other
        if isinstance(other, (int, Rational)):
            return FieldElement.const(self.q, Fraction(other))
        return NotImplemented

    def is_zero(self):
        return self.num.is_zero()

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.den == other.den:
            return self.num == other.num
        return self.num * other.den == other.num * self.den

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __neg__(self):
        return FieldElement(-self.num, self.den, _normalized=True)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        n1, d1, n2, d2 = self.num, self.den, other.num, other.den
        if d1 == d2:
            return FieldElement(n1 + n2, d1)
        t = exact_divide(d1, d2)
        if t is not None:
            return FieldElement(n1 + n2 * t, d1)
        t = exact_divide(d2, d1)
        if t is not None:
            return FieldElement(n1 * t + n2, d2)
        return FieldElement(n1 * d2 + n2 * d1, d1 * d2)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_zero() or other.is_zero():
            return FieldElement.const(self.q, 0)
        return FieldElement(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("zero denominator")
        return FieldElement(self.den, self.num)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k):
        return int_pow(self, k)

    def normalized(self):
        return FieldElement(self.num, self.den)

    def __str__(self):
        return f"({self.num.render()})/({self.den.render()})"

    def __repr__(self):
        return f"FieldElement({self}, q={self.q})"


def _normalize(num, den):
    if num.is_zero():
        return num, Poly.const(num.q, 1)
    num, den = _strip(num, den)
    if len(den.terms) == 1:
        # monomial denominators are already minimal after stripping
        return num, den
    t = exact_divide(num, den)
    if t is not None:
        return t, Poly.const(num.q, 1)
    if len(num.terms) > 1 and num.degree() < den.degree():
        t = exact_divide(den, num)
        if t is not None:
            return _strip(Poly.const(num.q, 1), t)
    return num, den


def int_pow(x, k):
    k = int(k)
    if k < 0:
        return int_pow(x.inverse(), -k)
    result = FieldElement.const(x.q, 1)
    base = x
    while k:
        if k & 1:
            result = result * base
        k >>= 1
        if k:
            base = base * base
    return result


@lru_cache(maxsize=None)
def gens(q):
    """The generators (X, Y, S) of Q(sqrt q)(X, Y)."""
    one = Poly.const(q, 1)
    make = lambda key: FieldElement(Poly(q, {key: Fraction(1)}, _canonical=True), one, _normalized=True)
    return make((1, 0, 0)), make((0, 1, 0)), make((0, 0, 1))


# -- the quadratic field Q(sqrt q) -------------------------------------------


class QuadraticNumber:
    """Exact element a + b*sqrt(q) of Q(sqrt q)."""

    __slots__ = ("a", "b", "q")

    def __init__(self, a, b, q):
        self.a = Fraction(a)
        self.b = Fraction(b)
        self.q = q

    def _coerce(self, other):
        if isinstance(other, QuadraticNumber):
            if other.q != self.q:
                raise ValueError(f"mixing q={self.q} and q={other.q}")
            return other
        if isinstance(other, (int, Rational)):
            return QuadraticNumber(other, 0, self.q)
        return NotImplemented

    def is_zero(self):
        return not self.a and not self.b

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self.a == other.a and self.b == other.b

    def __hash__(self):
        return hash((self.a, self.b, self.q))

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return QuadraticNumber(self.a + other.a, self.b + other.b, self.q)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticNumber(-self.a, -self.b, self.q)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b, c, d = self.a, self.b, other.a, other.b
        return QuadraticNumber(a * c + self.q * b * d, a * d + b * c, self.q)

    __rmul__ = __mul__

    def conjugate(self):
        return QuadraticNumber(self.a, -self.b, self.q)

    def inverse(self):
        norm = self.a * self.a - self.q * self.b * self.b
        if not norm:
            raise ZeroDivisionError("division by zero in Q(sqrt q)")
        return QuadraticNumber(self.a / norm, -self.b / norm, self.q)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k):
        result = QuadraticNumber(1, 0, self.q)
        base = self if k >= 0 else self.inverse()
        for _ in range(abs(k)):
            result = result * base
        return result

    def __str__(self):
        if not self.b:
            return str(self.a)
        return f"{self.a} + {self.b}*sqrt({self.q})"

    def __repr__(self):
        return f"QuadraticNumber({self.a}, {self.b}, q={self.q})"


class SpecializationPole(ZeroDivisionError):
    pass


def _as_quadratic(v, q):
    if isinstance(v, QuadraticNumber):
        if v.q != q:
            raise ValueError(f"value lives in Q(sqrt {v.q}), expected Q(sqrt {q})")
        return v
    if isinstance(v, (int, Rational)):
        return QuadraticNumber(v, 0, q)
    raise TypeError(f"only Q(sqrt q)-valued specializations are supported, got {v!r}")


def specialize(x, x_val, y_val):
    """Evaluate x at X := x_val, Y := y_val, S := sqrt(q), exactly."""
    q = x.q
    xv = _as_quadratic(x_val, q)
    yv = _as_quadratic(y_val, q)
    den = x.den.evaluate(xv, yv)
    if den.is_zero():
        failed = []
        checks = [
            ("1+X^2 = 0", 1 + xv * xv),
            ("1+Y^2 = 0", 1 + yv * yv),
            ("X^2 = q", xv * xv - q),
            ("Y^2 = q", yv * yv - q),
            ("X = 0", xv),
            ("Y = 0", yv),
        ]
        for name, value in checks:
            if value.is_zero():
                failed.append(name)
        reason = ", ".join(failed) if failed else "denominator vanishes"
        raise SpecializationPole(f"specialization pole: {reason}")
    return x.num.evaluate(xv, yv) / den
