"""Division contexts: exact arithmetic, inversion, derivation, text."""

import random
from fractions import Fraction

import pytest

from qnalg.errors import NotInvertible, ParseError
from qnalg.scalars import (
    MatrixContext,
    Quaternion,
    QuaternionContext,
    RatFuncContext,
    RationalContext,
    make_context,
)

RAT = RationalContext()
QUAT = QuaternionContext()
RF = RatFuncContext()
MAT2 = MatrixContext(2)


def test_make_context_aliases():
    assert make_context("rat").name == "rational"
    assert make_context("quat").name == "quaternion"
    assert make_context("ratfunc").name == "ratfunc"
    assert make_context("mat3").name == "mat3"
    with pytest.raises(ValueError):
        make_context("octonion")


def test_rational_basics():
    a = RAT.from_rational(Fraction(3, 4))
    assert RAT.render(a) == "3/4"
    assert RAT.eq(a * RAT.invert(a), RAT.one)
    assert RAT.is_zero(RAT.zero)
    assert RAT.derive(a) == RAT.zero
    with pytest.raises(NotInvertible):
        RAT.invert(RAT.zero)


def test_quaternion_multiplication_table():
    i = QUAT.parse("i")
    j = QUAT.parse("j")
    k = QUAT.parse("k")
    minus_one = QUAT.from_rational(Fraction(-1))
    assert i * i == minus_one
    assert j * j == minus_one
    assert k * k == minus_one
    assert i * j == k
    assert j * i == -k
    assert j * k == i
    assert k * i == j
    # noncommutative: i j != j i
    assert i * j != j * i


def test_quaternion_inverse_and_norm():
    q = QUAT.parse("1 + 2*i - k")
    inv = QUAT.invert(q)
    assert QUAT.eq(q * inv, QUAT.one)
    assert QUAT.eq(inv * q, QUAT.one)
    # derivative is identically zero on constants
    assert QUAT.derive(q) == QUAT.zero


def test_quaternion_parse_render_roundtrip():
    rng = random.Random(4)
    for _ in range(25):
        q = QUAT.random(rng)
        assert QUAT.parse(QUAT.render(q)) == q


def test_ratfunc_arithmetic_and_derivative():
    x = RF.parse("x")
    one = RF.one
    f = RF.parse("(x^2 + 1)/(x - 1)")
    g = RF.parse("x^2 + 1") * RF.invert(RF.parse("x - 1"))
    assert RF.eq(f, g)
    # quotient rule: (1/x)' = -1/x^2
    assert RF.eq(RF.derive(RF.invert(x)), -RF.invert(x * x))
    assert RF.eq(RF.derive(one), RF.zero)
    # d/dx x^3 = 3x^2
    assert RF.eq(RF.derive(x * x * x), RF.parse("3*x^2"))


def test_ratfunc_parse_render_roundtrip():
    rng = random.Random(9)
    for _ in range(25):
        f = RF.random(rng)
        assert RF.eq(RF.parse(RF.render(f)), f)


def test_matrix_context_entries_are_ratfuncs():
    m = MAT2.parse("[[x, 1], [0, x]]")
    minv = MAT2.invert(m)
    assert MAT2.eq(m * minv, MAT2.one)
    assert MAT2.eq(minv * m, MAT2.one)
    # entrywise derivative
    d = MAT2.derive(m)
    assert MAT2.render(d) == "[[1, 0], [0, 1]]"
    singular = MAT2.parse("[[1, 1], [1, 1]]")
    with pytest.raises(NotInvertible):
        MAT2.invert(singular)


def test_matrix_noncommutative():
    a = MAT2.parse("[[0, 1], [0, 0]]")
    b = MAT2.parse("[[0, 0], [1, 0]]")
    assert not MAT2.eq(a * b, b * a)


def test_matrix_parse_render_roundtrip():
    rng = random.Random(2)
    for _ in range(10):
        m = MAT2.random(rng)
        assert MAT2.eq(MAT2.parse(MAT2.render(m)), m)


def test_random_invertible_is_invertible():
    rng = random.Random(1)
    for ctx in (RAT, QUAT, RF, MAT2):
        a = ctx.random_invertible(rng)
        assert ctx.eq(a * ctx.invert(a), ctx.one)


def test_scalar_parse_errors_carry_position():
    with pytest.raises(ParseError) as exc:
        QUAT.parse("1 + $")
    assert exc.value.position == 4
    with pytest.raises(ParseError):
        RF.parse("x +")


def test_quaternion_components():
    q = Quaternion(Fraction(1), Fraction(-2), Fraction(0), Fraction(5))
    assert (q.a, q.b, q.c, q.d) == (1, -2, 0, 5)
    assert QUAT.render(q) == "1 - 2*i + 5*k"
