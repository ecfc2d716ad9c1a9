"""Polynomials in a central variable over a division context.

The variable t commutes with every coefficient; products therefore expand
by ordinary convolution while the coefficients multiply in the underlying
(noncommutative) context.  "Root" means right root: substituting xi for t
with powers of xi kept to the right of each coefficient.

A generic tuple of n roots produces one factorization into monic linear
factors per ordering of the roots, n! in total, all expanding to the same
polynomial.  The factors are built from conjugated roots x_{A,i}: the
target root x_i conjugated by the Vandermonde quasideterminant over the
values indexed by A with x_i listed last.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import (
    ConsistencyViolation,
    GenericityFailure,
    NotInvertible,
    ResourceLimit,
    SubmatrixNotInvertible,
)
from .linalg import vandermonde_qd
from .strings import bit, elems, mask_size, subsets_of

# 8! = 40320 orderings; anything larger must be driven one ordering at a time
MAX_FACTORIAL_N = 8


def _set_str(mask: int) -> str:
    return "{" + ",".join(str(e) for e in elems(mask)) + "}"


class OrePoly:
    """Dense polynomial, coefficients highest degree first.

    The zero polynomial is the empty coefficient list; otherwise the
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
    def zero(cls, dctx) -> "OrePoly":
        return cls(dctx, [])

    @classmethod
    def constant(cls, dctx, a) -> "OrePoly":
        return cls(dctx, [a])

    @classmethod
    def one(cls, dctx) -> "OrePoly":
        return cls(dctx, [dctx.one])

    @classmethod
    def linear_monic(cls, dctx, xi) -> "OrePoly":
        """The factor t - xi."""
        return cls(dctx, [dctx.one, -xi])

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "OrePoly") -> "OrePoly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        pad = len(a) - len(b)
        out = list(a[:pad])
        out.extend(x + y for x, y in zip(a[pad:], b))
        return OrePoly(self.dctx, out)

    def __neg__(self) -> "OrePoly":
        return OrePoly(self.dctx, [-c for c in self.coeffs])

    def __sub__(self, other: "OrePoly") -> "OrePoly":
        return self + (-other)

    def __mul__(self, other: "OrePoly") -> "OrePoly":
        if self.is_zero() or other.is_zero():
            return OrePoly.zero(self.dctx)
        out = [self.dctx.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for p, cp in enumerate(self.coeffs):
            for q, cq in enumerate(other.coeffs):
                out[p + q] = out[p + q] + cp * cq
        return OrePoly(self.dctx, out)

    def __eq__(self, other) -> bool:
        if not isinstance(other, OrePoly):
            return NotImplemented
        if len(self.coeffs) != len(other.coeffs):
            return False
        return all(self.dctx.eq(a, b) for a, b in zip(self.coeffs, other.coeffs))

    __hash__ = None

    def render(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        n = self.degree()
        for k, c in enumerate(self.coeffs):
            if self.dctx.is_zero(c):
                continue
            power = n - k
            var = "" if power == 0 else ("t" if power == 1 else f"t^{power}")
            body = self.dctx.render(c)
            if var and body == "1":
                parts.append(var)
            elif var:
                parts.append(f"({body})*{var}")
            else:
                parts.append(f"({body})")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"OrePoly({self.render()})"


def ore_mul(p: OrePoly, q: OrePoly) -> OrePoly:
    if p.dctx is not q.dctx:
        raise ValueError("polynomials come from different contexts")
    return p * q


def right_divide_linear(p: OrePoly, xi):
    """Split p as q*(t - xi) + rem.

    rem is the right evaluation a_0 xi^n + a_1 xi^{n-1} + ... + a_n, so it
    vanishes exactly when xi is a right root of p.
    """
    if p.degree() < 1:
        raise ValueError("dividend must have degree at least 1")
    qs = [p.coeffs[0]]
    for a in p.coeffs[1:-1]:
        qs.append(a + qs[-1] * xi)
    rem = p.coeffs[-1] + qs[-1] * xi
    return OrePoly(p.dctx, qs), rem


def right_evaluate(p: OrePoly, xi):
    """a_0 xi^n + a_1 xi^{n-1} + ... + a_n."""
    if p.is_zero():
        return p.dctx.zero
    if p.degree() == 0:
        return p.coeffs[0]
    return right_divide_linear(p, xi)[1]


def _conjugate_by_vandermonde(dctx, others, target, label):
    """V * target * V^{-1} with V the Vandermonde quasideterminant over
    others + [target]."""
    try:
        v = vandermonde_qd(dctx, list(others) + [target])
        vinv = dctx.invert(v)
    except (NotInvertible, SubmatrixNotInvertible) as exc:
        raise GenericityFailure(f"{label}: {exc}") from None
    return v * target * vinv


class RootTower:
    """All conjugated roots x_{A,i} over one root tuple, computed on demand.

    The values are independent of any ordering of A, so the cache is keyed
    by the subset bitmask alone.
    """

    def __init__(self, dctx, roots):
        self.dctx = dctx
        self.roots = tuple(roots)
        self.n = len(self.roots)
        if self.n == 0:
            raise ValueError("at least one root required")
        self._cache: dict = {}

    def x(self, a_mask: int, i: int):
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
            val = self.roots[i - 1]
        else:
            others = [self.roots[j - 1] for j in elems(a_mask)]
            val = _conjugate_by_vandermonde(
                self.dctx, others, self.roots[i - 1],
                f"x_{_set_str(a_mask)},{i}")
        self._cache[key] = val
        return val


def x_Ai(dctx, roots, a_mask: int, i: int):
    """The root x_i conjugated over the subset A (ascending order)."""
    return RootTower(dctx, roots).x(a_mask, i)


def x_Ai_ordered(dctx, roots, order, i: int):
    """Same value with A listed in an explicit order.

    The result must not depend on the order; tests exercise that.
    """
    if i in order:
        raise ValueError(f"index {i} lies inside the listed subset")
    if not order:
        return roots[i - 1]
    others = [roots[j - 1] for j in order]
    label = "x_{" + ",".join(str(j) for j in order) + "}," + str(i)
    return _conjugate_by_vandermonde(dctx, others, roots[i - 1], label)


def x_Ai_relative(dctx, roots, b_mask: int, a_mask: int, i: int, tower=None):
    """Rebuild x_{A,i} from the values one level down at B.

    Conjugates x_{B,i} by the Vandermonde quasideterminant over the
    level-B values indexed by A minus B, target last.  With B empty this
    is the direct construction.
    """
    if b_mask & ~a_mask:
        raise ValueError("B must be contained in A")
    if a_mask & bit(i):
        raise ValueError(f"index {i} lies inside {_set_str(a_mask)}")
    if tower is None:
        tower = RootTower(dctx, roots)
    others = [tower.x(b_mask, j) for j in elems(a_mask & ~b_mask)]
    target = tower.x(b_mask, i)
    if not others:
        return target
    label = f"x_{_set_str(a_mask)},{i} via {_set_str(b_mask)}"
    return _conjugate_by_vandermonde(dctx, others, target, label)


def x_Ai_relative_down(dctx, roots, b_mask: int, c_mask: int, j: int, tower=None):
    """Value of x_{C,j} recovered from the level-B value above it.

    The conjugator is the Vandermonde quasideterminant over level-C values
    indexed by B minus C with x_{C,j} listed last; the identity inverts the
    upward conjugation.  Agreement with the direct x_{C,j} is the
    cross-check this exists for.
    """
    if c_mask & ~b_mask:
        raise ValueError("C must be contained in B")
    if b_mask & bit(j):
        raise ValueError(f"index {j} lies inside {_set_str(b_mask)}")
    if tower is None:
        tower = RootTower(dctx, roots)
    others = [tower.x(c_mask, k) for k in elems(b_mask & ~c_mask)]
    target = tower.x(c_mask, j)
    if not others:
        return tower.x(b_mask, j)
    label = f"x_{_set_str(c_mask)},{j} via {_set_str(b_mask)}"
    try:
        v = vandermonde_qd(dctx, others + [target])
        vinv = dctx.invert(v)
    except (NotInvertible, SubmatrixNotInvertible) as exc:
        raise GenericityFailure(f"{label}: {exc}") from None
    return vinv * tower.x(b_mask, j) * v


def genericity_check(dctx, roots) -> dict:
    """Certify that every x_{A,i} is defined and that values sharing a
    subset level stay pairwise distinct.

    Distinctness is only demanded within a fixed A: those are the values
    that later share a Vandermonde matrix.  Values from different levels
    may coincide (for commutative scalars they all collapse to the plain
    roots, which is still generic as long as the roots are distinct).
    Failures are returned as data, never raised.
    """
    n = len(roots)
    undefined = []
    collisions = []
    tower = RootTower(dctx, roots)
    universe = (1 << n) - 1
    for a in subsets_of(universe):
        vals = {}
        for i in range(1, n + 1):
            if a & bit(i):
                continue
            try:
                vals[i] = tower.x(a, i)
            except GenericityFailure as exc:
                undefined.append(
                    {"subset": _set_str(a), "target": i, "reason": str(exc)})
        for i, j in itertools.combinations(sorted(vals), 2):
            if dctx.eq(vals[i], vals[j]):
                collisions.append({"subset": _set_str(a), "pair": [i, j]})
    return {
        "generic": not undefined and not collisions,
        "undefined": undefined,
        "collisions": collisions,
    }


def require_generic(dctx, roots) -> None:
    report = genericity_check(dctx, roots)
    if report["generic"]:
        return
    if report["undefined"]:
        first = report["undefined"][0]
        raise GenericityFailure(
            f"x_{first['subset']},{first['target']} undefined: {first['reason']}")
    first = report["collisions"][0]
    raise GenericityFailure(
        f"values over {first['subset']} collide at indices {first['pair']}")


def random_generic_roots(dctx, n: int, rng, tries: int = 64):
    """Draw root tuples until the genericity certificate passes."""
    for _ in range(tries):
        roots = [dctx.random(rng) for _ in range(n)]
        if genericity_check(dctx, roots)["generic"]:
            return roots
    raise GenericityFailure(f"no generic tuple of {n} roots in {tries} draws")


@dataclass
class Factorization:
    """One ordering's factorization.

    factors[k-1] is the k-th linear root: the product runs factors[n-1]
    leftmost down to factors[0] rightmost, so factors[0] is the plain root
    the ordering starts with.
    """
    ordering: tuple
    factors: list
    coefficients: list


def factorize_all(dctx, roots, a0=None):
    """Expand the factorization attached to every ordering of the roots.

    Returns (common polynomial, factorization list).  All n! expansions
    are compared coefficientwise; disagreement is an implementation bug
    and raises ConsistencyViolation, never a data error.
    """
    n = len(roots)
    if n == 0:
        raise ValueError("at least one root required")
    if n > MAX_FACTORIAL_N:
        raise ResourceLimit(
            f"{n}! orderings exceeds the n <= {MAX_FACTORIAL_N} limit")
    require_generic(dctx, roots)
    if a0 is None:
        a0 = dctx.one
    if dctx.is_zero(a0):
        raise ValueError("leading coefficient must be nonzero")
    tower = RootTower(dctx, roots)
    common = None
    out = []
    for perm in itertools.permutations(range(1, n + 1)):
        xis = []
        mask = 0
        for idx in perm:
            xis.append(tower.x(mask, idx))
            mask |= bit(idx)
        poly = OrePoly.constant(dctx, a0)
        for xi in reversed(xis):
            poly = poly * OrePoly.linear_monic(dctx, xi)
        if common is None:
            common = poly
        elif poly != common:
            raise ConsistencyViolation(
                f"expansions differ between orderings {out[0].ordering} and {perm}")
        out.append(Factorization(perm, xis, list(poly.coeffs)))
    _audit_cache(dctx, roots, tower)
    return common, out


def _audit_cache(dctx, roots, tower) -> None:
    # recompute a deterministic sample of cached values from scratch
    keys = sorted(tower._cache)
    step = max(1, len(keys) // 5)
    for key in keys[::step]:
        a_mask, i = key
        fresh = x_Ai(dctx, roots, a_mask, i)
        if not dctx.eq(fresh, tower._cache[key]):
            raise ConsistencyViolation(
                f"cached x_{_set_str(a_mask)},{i} disagrees with recomputation")


def vieta(dctx, roots, ordering, tower=None):
    """Signed coefficient sums for one ordering.

    Entry m is the sum over strictly descending m-tuples of products
    y_{j_1}...y_{j_m} where y_k is the k-th linear root of the ordering.
    For a monic expansion the degree-(n-m) coefficient equals (-1)^m
    times entry m; the sums themselves are ordering-independent.
    """
    n = len(roots)
    if sorted(ordering) != list(range(1, n + 1)):
        raise ValueError("ordering must be a permutation of 1..n")
    if tower is None:
        tower = RootTower(dctx, roots)
    ys = []
    mask = 0
    for idx in ordering:
        ys.append(tower.x(mask, idx))
        mask |= bit(idx)
    out = [dctx.one]
    for m in range(1, n + 1):
        acc = dctx.zero
        for combo in itertools.combinations(range(n), m):
            prod = dctx.one
            for k in reversed(combo):
                prod = prod * ys[k]
            acc = acc + prod
        out.append(acc)
    return out


def verify_relations_32(dctx, roots):
    """Exchange identities on the conjugated roots.

    For every subset A and i, j outside it, the sum and the product of
    x_{A+i,j} with x_{A,i} must be symmetric in i and j.  Returns a list
    of failure records, empty when everything holds.
    """
    n = len(roots)
    tower = RootTower(dctx, roots)
    failures = []
    universe = (1 << n) - 1
    for a in subsets_of(universe):
        if mask_size(a) > n - 2:
            continue
        outside = [i for i in range(1, n + 1) if not (a & bit(i))]
        for i, j in itertools.combinations(outside, 2):
            lhs = tower.x(a | bit(i), j) + tower.x(a, i)
            rhs = tower.x(a | bit(j), i) + tower.x(a, j)
            if not dctx.eq(lhs, rhs):
                failures.append(
                    {"relation": "sum", "subset": _set_str(a), "pair": [i, j]})
            lhs = tower.x(a | bit(i), j) * tower.x(a, i)
            rhs = tower.x(a | bit(j), i) * tower.x(a, j)
            if not dctx.eq(lhs, rhs):
                failures.append(
                    {"relation": "product", "subset": _set_str(a), "pair": [i, j]})
    return failures
