"""Differential operators with scalar coefficients.

An operator is a sum of a_k D^{n-k} terms; composing two of them uses
the twist D a = a D + a', so coefficients pick up derivatives as they
move past powers of D.  Application evaluates the displayed sum on an
element of the context.

Factorization into first-order factors comes in two flavors:

* from a flag of solutions, via logarithmic derivatives of Wronskian
  quasideterminants (one factorization per flag);
* from a tuple of first-order right roots f_1,...,f_n, via the
  conjugated values f_{A,i} built from theta-quasideterminants (one
  factorization per ordering, all expanding to the same operator).

With the zero derivation everything degenerates to the central-variable
polynomial picture: u_p(g) becomes g^p, the theta matrix becomes the
power matrix, and f_{A,i} becomes the conjugated root x_{A,i}.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .errors import (
    ConsistencyViolation,
    GenericityFailure,
    NotInvertible,
    ResourceLimit,
    SubmatrixNotInvertible,
)
from .linalg import mat_from_rows, quasideterminant
from .strings import bit, elems, mask_size, subsets_of

MAX_FACTORIAL_N = 8


def _set_str(mask: int) -> str:
    return "{" + ",".join(str(e) for e in elems(mask)) + "}"


def _derive_times(dctx, a, s: int):
    for _ in range(s):
        a = dctx.derive(a)
    return a


class DiffOp:
    """Dense differential operator, highest order first.

    The zero operator is the empty coefficient list; otherwise the
    leading coefficient is nonzero.
    """

    __slots__ = ("dctx", "coeffs")

    def __init__(self, dctx, coeffs):
        coeffs = list(coeffs)
        while coeffs and dctx.is_zero(coeffs[0]):
            coeffs.pop(0)
        self.dctx = dctx
        self.coeffs = coeffs

    @classmethod
    def zero(cls, dctx) -> "DiffOp":
        return cls(dctx, [])

    @classmethod
    def constant(cls, dctx, a) -> "DiffOp":
        return cls(dctx, [a])

    @classmethod
    def identity(cls, dctx) -> "DiffOp":
        return cls(dctx, [dctx.one])

    @classmethod
    def d(cls, dctx) -> "DiffOp":
        return cls(dctx, [dctx.one, dctx.zero])

    @classmethod
    def linear_monic(cls, dctx, b) -> "DiffOp":
        """The factor D - b."""
        return cls(dctx, [dctx.one, -b])

    def order(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "DiffOp") -> "DiffOp":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        pad = len(a) - len(b)
        out = list(a[:pad])
        out.extend(x + y for x, y in zip(a[pad:], b))
        return DiffOp(self.dctx, out)

    def __neg__(self) -> "DiffOp":
        return DiffOp(self.dctx, [-c for c in self.coeffs])

    def __sub__(self, other: "DiffOp") -> "DiffOp":
        return self + (-other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DiffOp):
            return NotImplemented
        if len(self.coeffs) != len(other.coeffs):
            return False
        return all(self.dctx.eq(a, b) for a, b in zip(self.coeffs, other.coeffs))

    __hash__ = None

    def render(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        n = self.order()
        for k, c in enumerate(self.coeffs):
            if self.dctx.is_zero(c):
                continue
            power = n - k
            var = "" if power == 0 else ("D" if power == 1 else f"D^{power}")
            body = self.dctx.render(c)
            if var and body == "1":
                parts.append(var)
            elif var:
                parts.append(f"({body})*{var}")
            else:
                parts.append(f"({body})")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"DiffOp({self.render()})"


def diffop_compose(L: DiffOp, M: DiffOp) -> DiffOp:
    """Operator product L∘M.

    Each D^p walks past a coefficient b of M by the power rule,
    D^p b = sum over s of C(p,s) b^{(s)} D^{p-s}.
    """
    dctx = L.dctx
    if dctx is not M.dctx:
        raise ValueError("operators come from different contexts")
    if L.is_zero() or M.is_zero():
        return DiffOp.zero(dctx)
    top = L.order() + M.order()
    out = [dctx.zero] * (top + 1)
    for k, a in enumerate(L.coeffs):
        p = L.order() - k
        for j, b in enumerate(M.coeffs):
            q = M.order() - j
            for s in range(p + 1):
                c = comb(p, s)
                term = a * _derive_times(dctx, b, s)
                if c != 1:
                    term = term * dctx.from_rational(Fraction(c))
                slot = top - (p - s + q)
                out[slot] = out[slot] + term
    return DiffOp(dctx, out)


def diffop_apply(L: DiffOp, phi):
    """Sum of a_k phi^{(n-k)}."""
    dctx = L.dctx
    if L.is_zero():
        return dctx.zero
    derivs = [phi]
    for _ in range(L.order()):
        derivs.append(dctx.derive(derivs[-1]))
    total = dctx.zero
    n = L.order()
    for k, a in enumerate(L.coeffs):
        total = total + a * derivs[n - k]
    return total


def u_p(dctx, g, p: int):
    """(D + g)^p applied to 1:  u_0 = 1, u_{p+1} = u_p' + g u_p."""
    if p < 0:
        raise ValueError("p must be nonnegative")
    u = dctx.one
    for _ in range(p):
        u = dctx.derive(u) + g * u
    return u


def theta_qd(dctx, fs):
    """Quasideterminant at the bottom-right corner of the matrix whose
    rows are u_0, u_1, ..., u_{m-1} of the arguments (ones on top).

    With the zero derivation this is the Vandermonde quasideterminant of
    the same arguments: u_p collapses to the p-th power and moving the
    ones row from bottom to top does not change the corner value.
    """
    fs = list(fs)
    m = len(fs)
    if m == 0:
        raise ValueError("theta of no arguments")
    rows = []
    us = [dctx.one for _ in fs]
    rows.append(list(us))
    for _ in range(m - 1):
        us = [dctx.derive(u) + f * u for f, u in zip(fs, us)]
        rows.append(list(us))
    try:
        return quasideterminant(dctx, mat_from_rows(rows), m, m)
    except (NotInvertible, SubmatrixNotInvertible) as exc:
        raise GenericityFailure(f"theta quasideterminant undefined: {exc}") from None


def _theta_conjugate(dctx, others, target, label):
    """theta * target * theta^{-1} + (D theta) * theta^{-1}."""
    try:
        th = theta_qd(dctx, list(others) + [target])
        thinv = dctx.invert(th)
    except (NotInvertible, SubmatrixNotInvertible) as exc:
        raise GenericityFailure(f"{label}: {exc}") from None
    except GenericityFailure as exc:
        raise GenericityFailure(f"{label}: {exc}") from None
    return th * target * thinv + dctx.derive(th) * thinv


class DiffTower:
    """All conjugated first-order roots f_{A,i} over one root tuple."""

    def __init__(self, dctx, fs):
        self.dctx = dctx
        self.fs = tuple(fs)
        self.n = len(self.fs)
        if self.n == 0:
            raise ValueError("at least one root required")
        self._cache: dict = {}

    def f(self, a_mask: int, i: int):
        key = (a_mask, i)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        if not 1 <= i <= self.n:
            raise ValueError(f"index {i} outside 1..{self.n}")
        if a_mask >> self.n:
            raise ValueError(f"subset {_set_str(a_mask)} outside 1..{self.n}")
        if a_mask & bit(i):
            raise ValueError(f"index {i} lies inside {_set_str(a_mask)}")
        if a_mask == 0:
            val = self.fs[i - 1]
        else:
            others = [self.fs[j - 1] for j in elems(a_mask)]
            val = _theta_conjugate(
                self.dctx, others, self.fs[i - 1],
                f"f_{_set_str(a_mask)},{i}")
        self._cache[key] = val
        return val


def f_Ai(dctx, fs, a_mask: int, i: int):
    """The root f_i conjugated over the subset A (ascending order)."""
    return DiffTower(dctx, fs).f(a_mask, i)


def f_Ai_ordered(dctx, fs, order, i: int):
    """Same value with A listed in an explicit order (must not matter)."""
    if i in order:
        raise ValueError(f"index {i} lies inside the listed subset")
    if not order:
        return fs[i - 1]
    others = [fs[j - 1] for j in order]
    label = "f_{" + ",".join(str(j) for j in order) + "}," + str(i)
    return _theta_conjugate(dctx, others, fs[i - 1], label)


def f_Ai_relative(dctx, fs, b_mask: int, a_mask: int, i: int, tower=None):
    """Rebuild f_{A,i} from the values one level down at B."""
    if b_mask & ~a_mask:
        raise ValueError("B must be contained in A")
    if a_mask & bit(i):
        raise ValueError(f"index {i} lies inside {_set_str(a_mask)}")
    if tower is None:
        tower = DiffTower(dctx, fs)
    others = [tower.f(b_mask, j) for j in elems(a_mask & ~b_mask)]
    target = tower.f(b_mask, i)
    if not others:
        return target
    label = f"f_{_set_str(a_mask)},{i} via {_set_str(b_mask)}"
    return _theta_conjugate(dctx, others, target, label)


def f_Ai_relative_down(dctx, fs, b_mask: int, c_mask: int, j: int, tower=None):
    """Value of f_{C,j} recovered from the level-B value above it.

    theta is built over level-C values indexed by B minus C with f_{C,j}
    last; the formula undoes the upward conjugation, including the
    derivative term.  Agreement with the direct f_{C,j} is the check.
    """
    if c_mask & ~b_mask:
        raise ValueError("C must be contained in B")
    if b_mask & bit(j):
        raise ValueError(f"index {j} lies inside {_set_str(b_mask)}")
    if tower is None:
        tower = DiffTower(dctx, fs)
    others = [tower.f(c_mask, k) for k in elems(b_mask & ~c_mask)]
    target = tower.f(c_mask, j)
    if not others:
        return tower.f(b_mask, j)
    label = f"f_{_set_str(c_mask)},{j} via {_set_str(b_mask)}"
    try:
        th = theta_qd(dctx, others + [target])
        thinv = dctx.invert(th)
    except (NotInvertible, SubmatrixNotInvertible, GenericityFailure) as exc:
        raise GenericityFailure(f"{label}: {exc}") from None
    return thinv * tower.f(b_mask, j) * th - thinv * dctx.derive(th)


def genericity_check_diff(dctx, fs) -> dict:
    """Certify that every f_{A,i} is defined.

    Unlike the central-variable case there is no distinctness clause:
    the only failure mode is a theta quasideterminant (or one of its
    submatrices) refusing to invert, and that is caught where it
    happens.  Failures are returned as data.
    """
    n = len(fs)
    undefined = []
    tower = DiffTower(dctx, fs)
    universe = (1 << n) - 1
    for a in subsets_of(universe):
        for i in range(1, n + 1):
            if a & bit(i):
                continue
            try:
                tower.f(a, i)
            except GenericityFailure as exc:
                undefined.append(
                    {"subset": _set_str(a), "target": i, "reason": str(exc)})
    return {"generic": not undefined, "undefined": undefined}


def require_generic_diff(dctx, fs) -> None:
    report = genericity_check_diff(dctx, fs)
    if report["generic"]:
        return
    first = report["undefined"][0]
    raise GenericityFailure(
        f"f_{first['subset']},{first['target']} undefined: {first['reason']}")


def random_generic_diff_roots(dctx, n: int, rng, tries: int = 64):
    """Draw root tuples until every f_{A,i} is defined."""
    for _ in range(tries):
        fs = [dctx.random(rng) for _ in range(n)]
        if genericity_check_diff(dctx, fs)["generic"]:
            return fs
    raise GenericityFailure(f"no generic tuple of {n} roots in {tries} draws")


@dataclass
class DiffFactorization:
    """One ordering's factorization; factors[0] is the rightmost factor."""
    ordering: tuple
    factors: list
    coefficients: list


def factorize_all_diff(dctx, fs):
    """Expand the factorization attached to every ordering of the roots.

    Returns (common operator, factorization list).  All n! compositions
    are compared coefficientwise; disagreement raises
    ConsistencyViolation.
    """
    n = len(fs)
    if n == 0:
        raise ValueError("at least one root required")
    if n > MAX_FACTORIAL_N:
        raise ResourceLimit(
            f"{n}! orderings exceeds the n <= {MAX_FACTORIAL_N} limit")
    require_generic_diff(dctx, fs)
    tower = DiffTower(dctx, fs)
    common = None
    out = []
    for perm in itertools.permutations(range(1, n + 1)):
        chain = []
        mask = 0
        for idx in perm:
            chain.append(tower.f(mask, idx))
            mask |= bit(idx)
        op = DiffOp.identity(dctx)
        for g in reversed(chain):
            op = diffop_compose(op, DiffOp.linear_monic(dctx, g))
        if common is None:
            common = op
        elif op != common:
            raise ConsistencyViolation(
                f"compositions differ between orderings {out[0].ordering} and {perm}")
        out.append(DiffFactorization(perm, chain, list(op.coeffs)))
    _audit_cache(dctx, fs, tower)
    return common, out


def _audit_cache(dctx, fs, tower) -> None:
    keys = sorted(tower._cache)
    step = max(1, len(keys) // 5)
    for key in keys[::step]:
        a_mask, i = key
        fresh = f_Ai(dctx, fs, a_mask, i)
        if not dctx.eq(fresh, tower._cache[key]):
            raise ConsistencyViolation(
                f"cached f_{_set_str(a_mask)},{i} disagrees with recomputation")


def verify_relations_43(dctx, fs):
    """Exchange identities on the conjugated roots.

    The sum identity matches the central-variable case; the product
    identity subtracts the derivative of the inner factor.  Returns a
    list of failure records, empty when everything holds.
    """
    n = len(fs)
    tower = DiffTower(dctx, fs)
    failures = []
    universe = (1 << n) - 1
    for a in subsets_of(universe):
        if mask_size(a) > n - 2:
            continue
        outside = [i for i in range(1, n + 1) if not (a & bit(i))]
        for i, j in itertools.combinations(outside, 2):
            lhs = tower.f(a | bit(i), j) + tower.f(a, i)
            rhs = tower.f(a | bit(j), i) + tower.f(a, j)
            if not dctx.eq(lhs, rhs):
                failures.append(
                    {"relation": "sum", "subset": _set_str(a), "pair": [i, j]})
            fi = tower.f(a, i)
            fj = tower.f(a, j)
            lhs = tower.f(a | bit(i), j) * fi - dctx.derive(fi)
            rhs = tower.f(a | bit(j), i) * fj - dctx.derive(fj)
            if not dctx.eq(lhs, rhs):
                failures.append(
                    {"relation": "product", "subset": _set_str(a), "pair": [i, j]})
    return failures


def wronskian_qd(dctx, phis):
    """Quasideterminant at (1, k) of the matrix whose rows are the
    (k-1)-st derivatives on top down to the plain values."""
    phis = list(phis)
    k = len(phis)
    if k == 0:
        raise ValueError("wronskian of no arguments")
    rows = [phis]
    for _ in range(k - 1):
        rows.append([dctx.derive(v) for v in rows[-1]])
    rows.reverse()
    try:
        return quasideterminant(dctx, mat_from_rows(rows), 1, k)
    except (NotInvertible, SubmatrixNotInvertible) as exc:
        raise GenericityFailure(f"wronskian quasideterminant undefined: {exc}") from None


def b_k(dctx, phis, k: int):
    """Logarithmic derivative of the Wronskian quasideterminant over the
    first k flag members."""
    if not 1 <= k <= len(phis):
        raise ValueError(f"k={k} outside 1..{len(phis)}")
    w = wronskian_qd(dctx, phis[:k])
    try:
        winv = dctx.invert(w)
    except NotInvertible as exc:
        raise GenericityFailure(f"wronskian over first {k} not invertible: {exc}") from None
    return dctx.derive(w) * winv


def miura_factorize(dctx, phis):
    """Monic operator annihilating the flag, as the ordered composition
    of the first-order factors D - b_k, highest level leftmost.

    Returns (operator, [b_1, ..., b_n]).
    """
    n = len(phis)
    if n == 0:
        raise ValueError("empty flag")
    bs = [b_k(dctx, phis, k) for k in range(1, n + 1)]
    op = DiffOp.identity(dctx)
    for b in reversed(bs):
        op = diffop_compose(op, DiffOp.linear_monic(dctx, b))
    return op, bs


def verify_prop_412(dctx, phis1, phis2, k: int):
    """Identities tying b_{k+1} and b_{k+2} of two flags that agree
    except at level k+1.

    Returns a list of failure records, empty when both identities hold.
    The caller is responsible for the flags actually agreeing at the
    other levels; this only evaluates the identities.
    """
    if len(phis1) != len(phis2):
        raise ValueError("flags must have equal length")
    if not 0 <= k <= len(phis1) - 2:
        raise ValueError(f"need 0 <= k <= {len(phis1) - 2}")
    b1_lo, b1_hi = b_k(dctx, phis1, k + 1), b_k(dctx, phis1, k + 2)
    b2_lo, b2_hi = b_k(dctx, phis2, k + 1), b_k(dctx, phis2, k + 2)
    failures = []
    if not dctx.eq(b1_hi + b1_lo, b2_hi + b2_lo):
        failures.append({"relation": "sum", "level": k + 1})
    lhs = b1_hi * b1_lo - dctx.derive(b1_lo)
    rhs = b2_hi * b2_lo - dctx.derive(b2_lo)
    if not dctx.eq(lhs, rhs):
        failures.append({"relation": "product", "level": k + 1})
    return failures
