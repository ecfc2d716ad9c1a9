"""Exact rational functions in one variable ``x`` over the rationals.

A value is a reduced fraction of dense univariate polynomials with
``fractions.Fraction`` coefficients.  The canonical form is unique:
numerator and denominator are coprime and the denominator is monic, so
``==`` is decidable by direct comparison.  The derivation is d/dx.

Polynomials are plain tuples of coefficients in increasing degree with
no trailing zeros; the zero polynomial is the empty tuple.
"""

from __future__ import annotations

from fractions import Fraction

from ..errors import NotInvertible

Poly = tuple  # tuple[Fraction, ...], lowest degree first, no trailing zeros


def ptrim(coeffs) -> Poly:
    cs = list(coeffs)
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


def pconst(c) -> Poly:
    c = Fraction(c)
    return (c,) if c != 0 else ()


def padd(a: Poly, b: Poly) -> Poly:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for k, c in enumerate(b):
        out[k] += c
    return ptrim(out)


def pneg(a: Poly) -> Poly:
    return tuple(-c for c in a)


def psub(a: Poly, b: Poly) -> Poly:
    return padd(a, pneg(b))


def pmul(a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return ()
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for p, ca in enumerate(a):
        if ca == 0:
            continue
        for q, cb in enumerate(b):
            out[p + q] += ca * cb
    return ptrim(out)


def pscale(a: Poly, c) -> Poly:
    c = Fraction(c)
    if c == 0:
        return ()
    return tuple(ci * c for ci in a)


def pdivmod(a: Poly, b: Poly) -> tuple[Poly, Poly]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(a)
    quo = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    lead = b[-1]
    while len(rem) >= len(b):
        c = rem[-1] / lead
        shift = len(rem) - len(b)
        quo[shift] = c
        for k, bc in enumerate(b):
            rem[shift + k] -= c * bc
        while rem and rem[-1] == 0:
            rem.pop()
    return ptrim(quo), ptrim(rem)


def pgcd(a: Poly, b: Poly) -> Poly:
    # Euclid, normalized monic so the gcd is canonical.
    while b:
        a, b = b, pdivmod(a, b)[1]
    if a:
        a = pscale(a, 1 / a[-1])
    return a


def pderive(a: Poly) -> Poly:
    return ptrim(Fraction(k) * a[k] for k in range(1, len(a)))


def prender(a: Poly, var: str = "x") -> str:
    if not a:
        return "0"
    parts = []
    for k in range(len(a) - 1, -1, -1):
        c = a[k]
        if c == 0:
            continue
        if k == 0:
            body = str(abs(c))
        else:
            xpow = var if k == 1 else f"{var}^{k}"
            body = xpow if abs(c) == 1 else f"{abs(c)}*{xpow}"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(parts)


class RatFunc:
    """A reduced ratio of two polynomials.  Immutable."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=(Fraction(1),)):
        num = ptrim(Fraction(c) for c in num)
        den = ptrim(Fraction(c) for c in den)
        if not den:
            raise ZeroDivisionError("rational function with zero denominator")
        g = pgcd(num, den)
        if g and g != (Fraction(1),):
            num = pdivmod(num, g)[0]
            den = pdivmod(den, g)[0]
        lead = den[-1]
        if lead != 1:
            num = pscale(num, 1 / lead)
            den = pscale(den, 1 / lead)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, *_):
        raise AttributeError("RatFunc is immutable")

    @classmethod
    def const(cls, c) -> "RatFunc":
        return cls(pconst(c))

    @classmethod
    def variable(cls) -> "RatFunc":
        return cls((Fraction(0), Fraction(1)))

    @property
    def is_zero(self) -> bool:
        return not self.num

    def __eq__(self, other):
        if not isinstance(other, RatFunc):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __add__(self, other):
        if not isinstance(other, RatFunc):
            return NotImplemented
        return RatFunc(
            padd(pmul(self.num, other.den), pmul(other.num, self.den)),
            pmul(self.den, other.den),
        )

    def __sub__(self, other):
        if not isinstance(other, RatFunc):
            return NotImplemented
        return RatFunc(
            psub(pmul(self.num, other.den), pmul(other.num, self.den)),
            pmul(self.den, other.den),
        )

    def __neg__(self):
        return RatFunc(pneg(self.num), self.den)

    def __mul__(self, other):
        if not isinstance(other, RatFunc):
            return NotImplemented
        return RatFunc(pmul(self.num, other.num), pmul(self.den, other.den))

    def inverse(self) -> "RatFunc":
        if self.is_zero:
            raise NotInvertible(self, "zero rational function")
        return RatFunc(self.den, self.num)

    def derivative(self) -> "RatFunc":
        # (p/q)' = (p'q - pq') / q^2
        return RatFunc(
            psub(pmul(pderive(self.num), self.den), pmul(self.num, pderive(self.den))),
            pmul(self.den, self.den),
        )

    def render(self) -> str:
        if self.den == (Fraction(1),):
            return prender(self.num)
        return f"({prender(self.num)})/({prender(self.den)})"

    def __repr__(self):
        return f"RatFunc({self.render()})"
