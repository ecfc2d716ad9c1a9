"""Square matrices over the rational-function field.

This ring is noncommutative and has zero divisors, so inversion can
fail on nonzero elements; that is the interesting regime for exercising
genericity handling downstream.  Inversion is exact Gaussian
elimination over the RatFunc field with the first nonzero pivot in each
column (rows below the current one are scanned top to bottom).  A
matrix is invertible exactly when elimination finds a pivot in every
column, which happens exactly when its determinant is a nonzero
rational function.

The derivation acts entrywise with d/dx.
"""

from __future__ import annotations

from fractions import Fraction

from ..errors import NotInvertible
from .ratfunc import RatFunc

_RF_ZERO = RatFunc(())
_RF_ONE = RatFunc.const(1)


class MatRF:
    """Immutable m-by-m matrix of RatFunc entries."""

    __slots__ = ("rows",)

    def __init__(self, rows):
        rows = tuple(tuple(r) for r in rows)
        m = len(rows)
        if m == 0 or any(len(r) != m for r in rows):
            raise ValueError("MatRF requires a nonempty square grid of entries")
        for r in rows:
            for e in r:
                if not isinstance(e, RatFunc):
                    raise TypeError("MatRF entries must be RatFunc")
        object.__setattr__(self, "rows", rows)

    def __setattr__(self, *_):
        raise AttributeError("MatRF is immutable")

    @property
    def dim(self) -> int:
        return len(self.rows)

    @classmethod
    def zeros(cls, m: int) -> "MatRF":
        return cls(tuple(tuple(_RF_ZERO for _ in range(m)) for _ in range(m)))

    @classmethod
    def identity(cls, m: int) -> "MatRF":
        return cls(
            tuple(
                tuple(_RF_ONE if p == q else _RF_ZERO for q in range(m))
                for p in range(m)
            )
        )

    @classmethod
    def scalar(cls, m: int, value: RatFunc) -> "MatRF":
        return cls(
            tuple(
                tuple(value if p == q else _RF_ZERO for q in range(m))
                for p in range(m)
            )
        )

    @property
    def is_zero(self) -> bool:
        return all(e.is_zero for r in self.rows for e in r)

    def __eq__(self, other):
        if not isinstance(other, MatRF):
            return NotImplemented
        return self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def _zip(self, other, op):
        if not isinstance(other, MatRF) or other.dim != self.dim:
            return None
        return MatRF(
            tuple(
                tuple(op(a, b) for a, b in zip(ra, rb))
                for ra, rb in zip(self.rows, other.rows)
            )
        )

    def __add__(self, other):
        out = self._zip(other, lambda a, b: a + b)
        return NotImplemented if out is None else out

    def __sub__(self, other):
        out = self._zip(other, lambda a, b: a - b)
        return NotImplemented if out is None else out

    def __neg__(self):
        return MatRF(tuple(tuple(-e for e in r) for r in self.rows))

    def __mul__(self, other):
        if not isinstance(other, MatRF) or other.dim != self.dim:
            return NotImplemented
        m = self.dim
        return MatRF(
            tuple(
                tuple(
                    _sum_rf(self.rows[p][t] * other.rows[t][q] for t in range(m))
                    for q in range(m)
                )
                for p in range(m)
            )
        )

    def inverse(self) -> "MatRF":
        m = self.dim
        work = [list(r) for r in self.rows]
        aug = [list(MatRF.identity(m).rows[p]) for p in range(m)]
        for col in range(m):
            pivot_row = next(
                (p for p in range(col, m) if not work[p][col].is_zero), None
            )
            if pivot_row is None:
                raise NotInvertible(self, "matrix is singular")
            if pivot_row != col:
                work[col], work[pivot_row] = work[pivot_row], work[col]
                aug[col], aug[pivot_row] = aug[pivot_row], aug[col]
            inv_pivot = work[col][col].inverse()
            work[col] = [inv_pivot * e for e in work[col]]
            aug[col] = [inv_pivot * e for e in aug[col]]
            for p in range(m):
                if p == col or work[p][col].is_zero:
                    continue
                factor = work[p][col]
                work[p] = [a - factor * b for a, b in zip(work[p], work[col])]
                aug[p] = [a - factor * b for a, b in zip(aug[p], aug[col])]
        return MatRF(aug)

    def derivative(self) -> "MatRF":
        return MatRF(tuple(tuple(e.derivative() for e in r) for r in self.rows))

    def render(self) -> str:
        return "[" + ", ".join(
            "[" + ", ".join(e.render() for e in r) + "]" for r in self.rows
        ) + "]"

    def __repr__(self):
        return f"MatRF({self.render()})"


def _sum_rf(items) -> RatFunc:
    total = _RF_ZERO
    for it in items:
        total = total + it
    return total
