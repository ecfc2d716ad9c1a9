"""Commutative targets of the two specialization maps.

``CommPoly`` is an ordinary polynomial in v_1..v_n with rational
coefficients, stored as a map from exponent tuples to coefficients.
``BoolePoly`` lives in the quotient by the relations w_i^2 = -w_i, so
every monomial is square-free and a monomial is just a subset bitmask;
multiplying two monomials picks up a sign from the overlap.
"""

from __future__ import annotations

from fractions import Fraction

from .strings import elems, mask_size


class CommPoly:
    """Polynomial in v_1..v_n over the rationals, canonical form."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: dict[tuple[int, ...], Fraction] | None = None):
        self.n = n
        self.terms = {k: v for k, v in (terms or {}).items() if v != 0}

    @classmethod
    def zero(cls, n: int) -> "CommPoly":
        return cls(n)

    @classmethod
    def const(cls, n: int, c) -> "CommPoly":
        c = Fraction(c)
        return cls(n, {(0,) * n: c} if c else {})

    @classmethod
    def variable(cls, n: int, i: int) -> "CommPoly":
        expo = tuple(1 if e == i else 0 for e in range(1, n + 1))
        return cls(n, {expo: Fraction(1)})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, CommPoly)
            and self.n == other.n
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def __add__(self, other: "CommPoly") -> "CommPoly":
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, Fraction(0)) + v
        return CommPoly(self.n, out)

    def __neg__(self) -> "CommPoly":
        return CommPoly(self.n, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other: "CommPoly") -> "CommPoly":
        return self + (-other)

    def __mul__(self, other: "CommPoly") -> "CommPoly":
        out: dict[tuple[int, ...], Fraction] = {}
        for ka, va in self.terms.items():
            for kb, vb in other.terms.items():
                k = tuple(a + b for a, b in zip(ka, kb))
                out[k] = out.get(k, Fraction(0)) + va * vb
        return CommPoly(self.n, out)

    def scale(self, c) -> "CommPoly":
        c = Fraction(c)
        return CommPoly(self.n, {k: c * v for k, v in self.terms.items()})

    def render(self) -> str:
        if not self.terms:
            return "0"
        def mono(k):
            parts = []
            for idx, e in enumerate(k, start=1):
                if e == 1:
                    parts.append(f"v{idx}")
                elif e > 1:
                    parts.append(f"v{idx}^{e}")
            return "*".join(parts)
        pieces = []
        for k in sorted(self.terms, key=lambda t: (sum(t), t)):
            c, m = self.terms[k], mono(k)
            body = str(abs(c)) if not m else (m if abs(c) == 1 else f"{abs(c)}*{m}")
            pieces.append(("- " if c < 0 else "+ ") + body)
        first = pieces[0]
        out = ("-" + first[2:]) if first.startswith("- ") else first[2:]
        return " ".join([out] + pieces[1:])

    def __repr__(self):
        return f"CommPoly({self.render()})"


def elementary_symmetric(n: int, k: int) -> CommPoly:
    """e_k(v_1,...,v_n), the sum of all k-element variable products."""
    if k == 0:
        return CommPoly.const(n, 1)
    if k > n:
        return CommPoly.zero(n)
    from itertools import combinations

    terms: dict[tuple[int, ...], Fraction] = {}
    for combo in combinations(range(n), k):
        expo = tuple(1 if idx in combo else 0 for idx in range(n))
        terms[expo] = Fraction(1)
    return CommPoly(n, terms)


class BoolePoly:
    """Multilinear polynomial in w_1..w_n modulo w_i^2 = -w_i.

    A monomial is the bitmask of its support; w^S * w^T =
    (-1)^{|S & T|} w^{S | T} since each clashing variable folds by the
    quotient relation.
    """

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: dict[int, Fraction] | None = None):
        self.n = n
        self.terms = {k: v for k, v in (terms or {}).items() if v != 0}

    @classmethod
    def zero(cls, n: int) -> "BoolePoly":
        return cls(n)

    @classmethod
    def const(cls, n: int, c) -> "BoolePoly":
        c = Fraction(c)
        return cls(n, {0: c} if c else {})

    @classmethod
    def variable(cls, n: int, i: int) -> "BoolePoly":
        return cls(n, {1 << (i - 1): Fraction(1)})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BoolePoly)
            and self.n == other.n
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def __add__(self, other: "BoolePoly") -> "BoolePoly":
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, Fraction(0)) + v
        return BoolePoly(self.n, out)

    def __neg__(self) -> "BoolePoly":
        return BoolePoly(self.n, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other: "BoolePoly") -> "BoolePoly":
        return self + (-other)

    def __mul__(self, other: "BoolePoly") -> "BoolePoly":
        out: dict[int, Fraction] = {}
        for ka, va in self.terms.items():
            for kb, vb in other.terms.items():
                sign = -1 if (mask_size(ka & kb) % 2) else 1
                k = ka | kb
                out[k] = out.get(k, Fraction(0)) + sign * va * vb
        return BoolePoly(self.n, out)

    def scale(self, c) -> "BoolePoly":
        c = Fraction(c)
        return BoolePoly(self.n, {k: c * v for k, v in self.terms.items()})

    def coefficient_vector(self) -> list[Fraction]:
        """Coefficients indexed by subset bitmask 0..2^n-1."""
        return [self.terms.get(m, Fraction(0)) for m in range(1 << self.n)]

    def render(self) -> str:
        if not self.terms:
            return "0"
        def mono(mask):
            return "*".join(f"w{e}" for e in elems(mask))
        pieces = []
        for k in sorted(self.terms, key=lambda m: (mask_size(m), m)):
            c, m = self.terms[k], mono(k)
            body = str(abs(c)) if not m else (m if abs(c) == 1 else f"{abs(c)}*{m}")
            pieces.append(("- " if c < 0 else "+ ") + body)
        first = pieces[0]
        out = ("-" + first[2:]) if first.startswith("- ") else first[2:]
        return " ".join([out] + pieces[1:])

    def __repr__(self):
        return f"BoolePoly({self.render()})"


def one_plus_w(n: int, mask: int) -> BoolePoly:
    """The product of (1 + w_j) over j in the subset ``mask``."""
    out = BoolePoly.const(n, 1)
    for j in elems(mask):
        out = out * (BoolePoly.const(n, 1) + BoolePoly.variable(n, j))
    return out
