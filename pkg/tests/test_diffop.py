"""Differential operators, conjugated first-order roots, flag
factorizations, and the log-derivative route."""

import random

import pytest

from qnalg.diffop import (
    DiffOp,
    DiffTower,
    _audit_cache,
    b_k,
    diffop_apply,
    diffop_compose,
    f_Ai,
    f_Ai_ordered,
    f_Ai_relative,
    f_Ai_relative_down,
    factorize_all_diff,
    genericity_check_diff,
    miura_factorize,
    random_generic_diff_roots,
    require_generic_diff,
    theta_qd,
    u_p,
    verify_prop_412,
    verify_relations_43,
    wronskian_qd,
)
from qnalg.errors import (
    ConsistencyViolation,
    GenericityFailure,
    ResourceLimit,
)
from qnalg.linalg import vandermonde_qd
from qnalg.orepoly import factorize_all, random_generic_roots
from qnalg.scalars import make_context
from qnalg.strings import bit, mask_of, subsets_of

RF = make_context("ratfunc")
RAT = make_context("rational")
HH = make_context("quat")
M2 = make_context("mat2")

X = RF.parse("x")


# -- operator layer ------------------------------------------------------


def test_compose_two_linear_factors():
    a, b = RF.parse("x"), RF.parse("x^2")
    got = diffop_compose(DiffOp.linear_monic(RF, a), DiffOp.linear_monic(RF, b))
    manual = DiffOp(RF, [RF.one, -(a + b), a * b - RF.derive(b)])
    assert got == manual


def test_compose_square_of_log_derivative():
    g = RF.parse("1/x")
    L = diffop_compose(DiffOp.linear_monic(RF, g), DiffOp.linear_monic(RF, g))
    assert L.render() == "D^2 + ((-2)/(x))*D + ((2)/(x^2))"
    assert RF.is_zero(diffop_apply(L, X))
    assert RF.is_zero(diffop_apply(L, RF.parse("x^2")))


def test_compose_identities_and_guards():
    L = DiffOp(RF, [RF.one, X])
    assert diffop_compose(DiffOp.identity(RF), L) == L
    assert diffop_compose(L, DiffOp.zero(RF)).is_zero()
    with pytest.raises(ValueError):
        diffop_compose(L, DiffOp.identity(RAT))


def test_apply_first_order_factor():
    factor = DiffOp.linear_monic(RF, RF.parse("1/x"))
    assert RF.is_zero(diffop_apply(factor, X))
    assert RF.eq(diffop_apply(factor, RF.parse("x^2")), X)


def test_u_p_matches_operator_powers():
    g = X
    op = DiffOp.identity(RF)
    for p in range(4):
        assert RF.eq(u_p(RF, g, p), diffop_apply(op, RF.one))
        op = diffop_compose(op, DiffOp(RF, [RF.one, g]))
    with pytest.raises(ValueError):
        u_p(RF, g, -1)


def test_u_2_is_derivative_plus_square():
    for text in ("x", "1/x", "x^2 + 1"):
        g = RF.parse(text)
        assert RF.eq(u_p(RF, g, 2), RF.derive(g) + g * g)


# -- the two quasideterminant builders ------------------------------------


def test_theta_collapses_to_vandermonde_without_derivation():
    vals2 = [RAT.from_rational(c) for c in (2, 5)]
    vals3 = [RAT.from_rational(c) for c in (2, 5, 7)]
    assert RAT.eq(theta_qd(RAT, vals2), vandermonde_qd(RAT, vals2))
    assert RAT.eq(theta_qd(RAT, vals3), vandermonde_qd(RAT, vals3))
    assert RAT.eq(theta_qd(RAT, [RAT.from_rational(9)]), RAT.one)
    with pytest.raises(ValueError):
        theta_qd(RAT, [])


def test_wronskian_values():
    assert RF.eq(wronskian_qd(RF, [X]), X)
    assert RF.eq(wronskian_qd(RF, [X, RF.parse("x^2")]), X)
    with pytest.raises(ValueError):
        wronskian_qd(RF, [])


# -- conjugated first-order roots ------------------------------------------


def test_diff_tower_base_and_validation():
    fs = [RF.parse("1/x"), RF.parse("2/x")]
    tower = DiffTower(RF, fs)
    assert RF.eq(tower.f(0, 1), fs[0])
    assert RF.eq(tower.f(0, 2), fs[1])
    with pytest.raises(ValueError):
        tower.f(mask_of({1}), 1)
    with pytest.raises(ValueError):
        tower.f(0, 3)
    with pytest.raises(ValueError):
        DiffTower(RF, [])


def test_ordered_value_is_order_independent():
    rng = random.Random(41)
    fs = random_generic_diff_roots(RF, 3, rng)
    for i in (1, 2, 3):
        rest = tuple(j for j in (1, 2, 3) if j != i)
        a = f_Ai_ordered(RF, fs, rest, i)
        b = f_Ai_ordered(RF, fs, rest[::-1], i)
        assert RF.eq(a, b)
        assert RF.eq(a, f_Ai(RF, fs, mask_of(set(rest)), i))
    with pytest.raises(ValueError):
        f_Ai_ordered(RF, fs, (1, 2), 2)


def test_zero_derivation_tower_matches_polynomial_tower():
    # with a zero derivation the operator construction degenerates to
    # the central-variable one, so both towers must agree everywhere
    from qnalg.orepoly import RootTower

    rng = random.Random(42)
    vals = random_generic_roots(HH, 3, rng)
    dt = DiffTower(HH, vals)
    pt = RootTower(HH, vals)
    for a in subsets_of(mask_of({1, 2, 3})):
        for i in (1, 2, 3):
            if a & bit(i):
                continue
            assert HH.eq(dt.f(a, i), pt.x(a, i))


def test_relative_lift_and_drop_all_chains():
    rng = random.Random(43)
    fs = random_generic_diff_roots(M2, 2, rng)
    tower = DiffTower(M2, fs)
    universe = mask_of({1, 2})
    for a in subsets_of(universe):
        for b in subsets_of(a):
            for i in (1, 2):
                if a & bit(i):
                    continue
                assert M2.eq(
                    f_Ai_relative(M2, fs, b, a, i, tower), tower.f(a, i)
                )
                assert M2.eq(
                    f_Ai_relative_down(M2, fs, a, b, i, tower), tower.f(b, i)
                )
    with pytest.raises(ValueError):
        f_Ai_relative(M2, fs, mask_of({2}), mask_of({1}), 2)
    with pytest.raises(ValueError):
        f_Ai_relative_down(M2, fs, mask_of({1}), mask_of({1, 2}), 2)


def test_diff_genericity_is_definedness_only():
    fs = [RF.parse("1/x"), RF.parse("3/x")]
    report = genericity_check_diff(RF, fs)
    assert report == {"generic": True, "undefined": []}
    dup = [RAT.from_rational(1), RAT.from_rational(1)]
    bad = genericity_check_diff(RAT, dup)
    assert not bad["generic"]
    assert bad["undefined"]
    with pytest.raises(GenericityFailure):
        require_generic_diff(RAT, dup)


# -- factorizations --------------------------------------------------------


def test_factorize_all_diff_matrix_scalars():
    rng = random.Random(44)
    fs = random_generic_diff_roots(M2, 2, rng)
    op, facs = factorize_all_diff(M2, fs)
    assert [f.ordering for f in facs] == [(1, 2), (2, 1)]
    assert op.order() == 2
    for fac in facs:
        rebuilt = DiffOp.identity(M2)
        for g in reversed(fac.factors):
            rebuilt = diffop_compose(rebuilt, DiffOp.linear_monic(M2, g))
        assert rebuilt == op
        assert fac.coefficients == list(op.coeffs)


def test_factorize_all_diff_zero_derivation_matches_polynomials():
    rng = random.Random(45)
    vals = random_generic_roots(HH, 3, rng)
    op, _ = factorize_all_diff(HH, vals)
    poly, _ = factorize_all(HH, vals)
    assert all(HH.eq(a, b) for a, b in zip(op.coeffs, poly.coeffs))


def test_factorize_all_diff_guards():
    with pytest.raises(ValueError):
        factorize_all_diff(RF, [])
    with pytest.raises(ResourceLimit):
        factorize_all_diff(RAT, [RAT.from_rational(c) for c in range(1, 10)])
    with pytest.raises(GenericityFailure):
        factorize_all_diff(RAT, [RAT.from_rational(1), RAT.from_rational(1)])


def test_exchange_identities_on_diff_roots():
    rng = random.Random(46)
    fs = random_generic_diff_roots(M2, 2, rng)
    assert verify_relations_43(M2, fs) == []
    fs3 = random_generic_diff_roots(RF, 3, rng)
    assert verify_relations_43(RF, fs3) == []


def test_diff_cache_audit_catches_corruption():
    fs = [RF.parse("1/x"), RF.parse("2/x")]
    tower = DiffTower(RF, fs)
    tower.f(0, 1)
    tower.f(mask_of({1}), 2)
    tower._cache[(mask_of({1}), 2)] = RF.parse("x")
    with pytest.raises(ConsistencyViolation):
        _audit_cache(RF, fs, tower)


# -- flags and log derivatives ---------------------------------------------

MONOMIAL_FLAGS = [
    ["x"],
    ["x", "x^2"],
    ["x", "x^2", "x^3"],
]


@pytest.mark.parametrize("texts", MONOMIAL_FLAGS)
def test_miura_factorization_annihilates_flag(texts):
    phis = [RF.parse(t) for t in texts]
    op, bs = miura_factorize(RF, phis)
    assert op.order() == len(phis)
    assert len(bs) == len(phis)
    for phi in phis:
        assert RF.is_zero(diffop_apply(op, phi))


def test_miura_known_operator():
    op, bs = miura_factorize(RF, [X, RF.parse("x^2")])
    assert op.render() == "D^2 + ((-2)/(x))*D + ((2)/(x^2))"
    assert [RF.render(b) for b in bs] == ["(1)/(x)", "(1)/(x)"]
    with pytest.raises(ValueError):
        miura_factorize(RF, [])


def test_b_k_equals_chain_values_of_log_derivatives():
    phis = [X, RF.parse("x^2"), RF.parse("x^3")]
    fs = [RF.derive(p) * RF.invert(p) for p in phis]
    tower = DiffTower(RF, fs)
    prefix = 0
    for k in (1, 2, 3):
        assert RF.eq(b_k(RF, phis, k), tower.f(prefix, k))
        prefix |= bit(k)
    with pytest.raises(ValueError):
        b_k(RF, phis, 4)


def test_neighbor_level_identities():
    phis = [X, RF.parse("x^2"), RF.parse("x^3")]
    # swap one flag member for another spanning the same next level
    assert verify_prop_412(
        RF, phis, [RF.parse("x + x^2"), RF.parse("x^2"), RF.parse("x^3")], 0
    ) == []
    assert verify_prop_412(
        RF, phis, [X, RF.parse("x^2 + x^3"), RF.parse("x^3")], 1
    ) == []
    # a replacement escaping the enclosing level breaks the precondition
    # and the identities report it
    broken = verify_prop_412(
        RF, phis, [RF.parse("x + 1"), RF.parse("x^2"), RF.parse("x^3")], 0
    )
    assert {f["relation"] for f in broken} == {"sum", "product"}
    with pytest.raises(ValueError):
        verify_prop_412(RF, phis, phis, 2)
    with pytest.raises(ValueError):
        verify_prop_412(RF, phis, phis[:2], 0)
