"""Quasideterminants and exact matrix inversion over a division context.

For a square matrix X and a position (p, q) (1-based), the
quasideterminant is

    |X|_pq  =  x_pq - r * inv(X^pq) * c

where X^pq deletes row p and column q, r is row p without column q, c
is column q without row p, and the product is taken left to right (the
order matters over noncommutative scalars).  A 1x1 matrix has a single
quasideterminant equal to its entry; no inversion is involved.

Two inverse routes are provided and must agree whenever both exist:

* ``invert_gauss`` -- Gaussian elimination with left row operations,
  choosing in each column the first invertible pivot scanning down.
  Left row operations compose to a left inverse, which for square
  matrices over every supported context is also a right inverse (both
  agreements are asserted).
* ``invert_quasidet`` -- entry (q, p) of the inverse is the inverse of
  the (p, q) quasideterminant, computed recursively down to 1x1.

Vandermonde quasideterminants: ``vandermonde_matrix(ctx, ys)`` stacks
rows of decreasing powers, top row y^(m-1) down to a bottom row of
ones, and ``vandermonde_qd`` takes the quasideterminant at position
(1, m): first row, last column.  For a single argument the matrix is
((1,)) and the value is 1; callers rely on that convention.
"""

from __future__ import annotations

from .errors import ConsistencyViolation, NotInvertible, SubmatrixNotInvertible

Matrix = tuple  # tuple[tuple[scalar, ...], ...]


def mat_from_rows(rows) -> Matrix:
    rows = tuple(tuple(r) for r in rows)
    m = len(rows)
    if m == 0 or any(len(r) != m for r in rows):
        raise ValueError("expected a nonempty square matrix")
    return rows


def mat_identity(ctx, m: int) -> Matrix:
    return tuple(
        tuple(ctx.one if p == q else ctx.zero for q in range(m)) for p in range(m)
    )


def mat_mul(ctx, a: Matrix, b: Matrix) -> Matrix:
    m = len(a)
    out = []
    for p in range(m):
        row = []
        for q in range(m):
            acc = ctx.zero
            for t in range(m):
                acc = acc + a[p][t] * b[t][q]
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def invert_gauss(ctx, mat: Matrix) -> Matrix:
    """Exact inverse by Gaussian elimination, or NotInvertible."""
    m = len(mat)
    work = [list(r) for r in mat]
    aug = [list(r) for r in mat_identity(ctx, m)]
    for col in range(m):
        pivot_row = inv_pivot = None
        for p in range(col, m):
            if ctx.is_zero(work[p][col]):
                continue
            try:
                inv_pivot = ctx.invert(work[p][col])
            except NotInvertible:
                continue
            pivot_row = p
            break
        if pivot_row is None:
            raise NotInvertible(mat, "no invertible pivot: matrix is singular")
        if pivot_row != col:
            work[col], work[pivot_row] = work[pivot_row], work[col]
            aug[col], aug[pivot_row] = aug[pivot_row], aug[col]
        work[col] = [inv_pivot * e for e in work[col]]
        aug[col] = [inv_pivot * e for e in aug[col]]
        for p in range(m):
            if p == col or ctx.is_zero(work[p][col]):
                continue
            factor = work[p][col]
            work[p] = [a - factor * b for a, b in zip(work[p], work[col])]
            aug[p] = [a - factor * b for a, b in zip(aug[p], aug[col])]
    inv = tuple(tuple(r) for r in aug)
    ident = mat_identity(ctx, m)
    if mat_mul(ctx, inv, mat) != ident or mat_mul(ctx, mat, inv) != ident:
        raise ConsistencyViolation("computed inverse failed verification")
    return inv


def _delete(mat: Matrix, p: int, q: int) -> Matrix:
    return tuple(
        tuple(e for cq, e in enumerate(r) if cq != q)
        for rp, r in enumerate(mat)
        if rp != p
    )


def _qd_at(ctx, mat: Matrix, row: int, col: int, inverter):
    m = len(mat)
    if not (1 <= row <= m and 1 <= col <= m):
        raise ValueError("quasideterminant position out of range")
    if m == 1:
        return mat[0][0]
    p, q = row - 1, col - 1
    sub = _delete(mat, p, q)
    try:
        sub_inv = inverter(ctx, sub)
    except NotInvertible:
        raise SubmatrixNotInvertible(row, col, sub) from None
    r = [mat[p][cq] for cq in range(m) if cq != q]
    c = [mat[rp][q] for rp in range(m) if rp != p]
    acc = ctx.zero
    for s in range(m - 1):
        for t in range(m - 1):
            acc = acc + r[s] * sub_inv[s][t] * c[t]
    return mat[p][q] - acc


def quasideterminant(ctx, mat: Matrix, row: int, col: int):
    """|mat|_(row, col) with 1-based indices; the submatrix inverse is
    computed by Gaussian elimination."""
    return _qd_at(ctx, mat, row, col, invert_gauss)


def invert_quasidet(ctx, mat: Matrix) -> Matrix:
    """Inverse with entry (q, p) = inv(|mat|_(p, q)), all positions
    computed recursively through quasideterminants (the inner
    submatrix inverses use this same route, down to 1x1)."""
    m = len(mat)
    out = [[None] * m for _ in range(m)]
    for p in range(1, m + 1):
        for q in range(1, m + 1):
            qd = _qd_at(ctx, mat, p, q, invert_quasidet)
            out[q - 1][p - 1] = ctx.invert(qd)
    return tuple(tuple(r) for r in out)


def scalar_pow(ctx, a, k: int):
    out = ctx.one
    for _ in range(k):
        out = out * a
    return out


def vandermonde_matrix(ctx, ys) -> Matrix:
    ys = tuple(ys)
    m = len(ys)
    if m == 0:
        raise ValueError("vandermonde of no arguments")
    return tuple(
        tuple(scalar_pow(ctx, y, m - 1 - p) for y in ys) for p in range(m)
    )


def vandermonde_qd(ctx, ys):
    """Quasideterminant of the power matrix at (1, m); equals 1 when
    only one argument is given (the 1x1 matrix of ones)."""
    ys = tuple(ys)
    return quasideterminant(ctx, vandermonde_matrix(ctx, ys), 1, len(ys))
