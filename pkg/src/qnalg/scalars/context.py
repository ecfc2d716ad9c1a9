"""Division contexts: the one scalar contract every other module uses.

A context bundles a concrete coefficient domain with the handful of
operations generic algorithms need beyond ``+ - *`` (which the values
carry themselves): distinguished constants, exact inversion, the
derivation, seeded random element generation, and text round-tripping.

Contexts:

==========  ===========================  ===========  ==============
name        values                       commutative  derivation
==========  ===========================  ===========  ==============
rational    fractions.Fraction           yes          zero
quaternion  Quaternion                   no           zero
ratfunc     RatFunc                      yes          d/dx
mat<m>      MatRF (m-by-m over RatFunc)  no           entrywise d/dx
==========  ===========================  ===========  ==============

Random draws keep integer magnitudes at most 9 and polynomial degrees
at most 2 (matrix entries: degree at most 1) so exact arithmetic stays
fast; the draws are fully determined by the caller's RNG.
"""

from __future__ import annotations

import re
from fractions import Fraction

from ..errors import NotInvertible
from .matrf import MatRF
from .parse import parse_scalar
from .quaternion import Quaternion
from .ratfunc import RatFunc

_MAX_INT = 9


def _rand_fraction(rng):
    return Fraction(rng.randint(-_MAX_INT, _MAX_INT), rng.randint(1, _MAX_INT))


def _rand_poly(rng, max_degree, nonzero=False):
    while True:
        coeffs = tuple(
            Fraction(rng.randint(-_MAX_INT, _MAX_INT))
            for _ in range(rng.randint(0, max_degree) + 1)
        )
        if any(coeffs) or not nonzero:
            return coeffs


class DivisionContext:
    """Base class; concrete contexts fill in the class attributes and
    the value-level hooks."""

    name = "?"
    matrix_entry_context = None
    atom_names: dict = {}

    # -- constants -------------------------------------------------
    zero = None
    one = None

    def from_rational(self, c):
        raise NotImplementedError

    # -- operations ------------------------------------------------
    def invert(self, a):
        raise NotImplementedError

    def derive(self, a):
        raise NotImplementedError

    def is_zero(self, a) -> bool:
        return a == self.zero

    def eq(self, a, b) -> bool:
        return a == b

    # -- generation and text ----------------------------------------
    def random(self, rng):
        raise NotImplementedError

    def random_invertible(self, rng):
        for _ in range(64):
            a = self.random(rng)
            try:
                self.invert(a)
            except NotInvertible:
                continue
            return a
        raise NotInvertible(None, "could not draw an invertible element")

    def parse(self, text: str):
        return parse_scalar(self, text)

    def render(self, a) -> str:
        raise NotImplementedError

    def __repr__(self):
        return f"<context {self.name}>"


class RationalContext(DivisionContext):
    name = "rational"
    zero = Fraction(0)
    one = Fraction(1)

    def from_rational(self, c):
        return Fraction(c)

    def invert(self, a):
        if a == 0:
            raise NotInvertible(a, "zero rational")
        return 1 / Fraction(a)

    def derive(self, a):
        return Fraction(0)

    def random(self, rng):
        return _rand_fraction(rng)

    def render(self, a) -> str:
        return str(a)


class QuaternionContext(DivisionContext):
    name = "quaternion"
    zero = Quaternion()
    one = Quaternion(1)
    atom_names = {
        "i": Quaternion(0, 1),
        "j": Quaternion(0, 0, 1),
        "k": Quaternion(0, 0, 0, 1),
    }

    def from_rational(self, c):
        return Quaternion(Fraction(c))

    def invert(self, a):
        return a.inverse()

    def derive(self, a):
        return self.zero

    def is_zero(self, a) -> bool:
        return a.is_zero

    def random(self, rng):
        return Quaternion(*(_rand_fraction(rng) for _ in range(4)))

    def render(self, a) -> str:
        return a.render()


class RatFuncContext(DivisionContext):
    name = "ratfunc"
    zero = RatFunc(())
    one = RatFunc.const(1)
    atom_names = {"x": RatFunc.variable()}

    def from_rational(self, c):
        return RatFunc.const(c)

    def invert(self, a):
        return a.inverse()

    def derive(self, a):
        return a.derivative()

    def is_zero(self, a) -> bool:
        return a.is_zero

    def random(self, rng):
        return RatFunc(_rand_poly(rng, 2), _rand_poly(rng, 2, nonzero=True))

    def render(self, a) -> str:
        return a.render()


class MatrixContext(DivisionContext):
    def __init__(self, dim: int):
        if dim < 1:
            raise ValueError("matrix dimension must be positive")
        self.dim = dim
        self.name = f"mat{dim}"
        self.zero = MatRF.zeros(dim)
        self.one = MatRF.identity(dim)
        self.matrix_entry_context = RatFuncContext()
        self.atom_names = {"x": MatRF.scalar(dim, RatFunc.variable())}

    def from_rational(self, c):
        return MatRF.scalar(self.dim, RatFunc.const(c))

    def from_entries(self, rows):
        if len(rows) != self.dim or any(len(r) != self.dim for r in rows):
            raise ValueError(f"expected a {self.dim}x{self.dim} matrix")
        return MatRF(rows)

    def invert(self, a):
        return a.inverse()

    def derive(self, a):
        return a.derivative()

    def is_zero(self, a) -> bool:
        return a.is_zero

    def random(self, rng):
        # dense degree-<=1 polynomial entries
        return MatRF(
            tuple(
                tuple(RatFunc(_rand_poly(rng, 1)) for _ in range(self.dim))
                for _ in range(self.dim)
            )
        )

    def render(self, a) -> str:
        return a.render()


_MAT_RE = re.compile(r"^mat(\d+)$")
_ALIASES = {
    "rat": "rational",
    "rational": "rational",
    "quat": "quaternion",
    "quaternion": "quaternion",
    "ratfunc": "ratfunc",
    "rf": "ratfunc",
}


def make_context(spec: str) -> DivisionContext:
    """Build a context from its CLI name: rat | quat | ratfunc | mat<m>."""
    spec = spec.strip().lower()
    m = _MAT_RE.match(spec)
    if m:
        return MatrixContext(int(m.group(1)))
    canon = _ALIASES.get(spec)
    if canon == "rational":
        return RationalContext()
    if canon == "quaternion":
        return QuaternionContext()
    if canon == "ratfunc":
        return RatFuncContext()
    raise ValueError(f"unknown scalar ring {spec!r}")
