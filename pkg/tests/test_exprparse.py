"""Expression grammar: tokens, AST shape, folding, and error reporting."""

import random
from fractions import Fraction

import pytest

from qnalg.errors import ParseError
from qnalg.exprparse import parse_ast, parse_expression, tokenize
from qnalg.qn import NormalizationContext, WordSum
from qnalg.strings import mask_of


def test_tokenize_kinds_and_spans():
    toks = tokenize("3 r{1}")
    assert [(t.kind, t.text) for t in toks] == [
        ("INT", "3"),
        ("NAME", "r"),
        ("{", "{"),
        ("INT", "1"),
        ("}", "}"),
        ("END", ""),
    ]
    assert (toks[0].start, toks[0].end) == (0, 1)
    assert (toks[1].start, toks[1].end) == (2, 3)


def test_ast_equality_ignores_whitespace():
    assert parse_ast("r{1} + r{2}") == parse_ast("  r{1}+r{2}")
    assert parse_ast("z{1},{2}*u{1}") == parse_ast("z{1},{2} u{1}")


def test_ast_spans_cover_source():
    node = parse_ast("r{1} + r{2}")
    assert node.span == (0, 11)


def test_semantic_identities():
    # the pair atom with empty second subset collapses to the subset sum
    assert parse_expression("z{1,2},{}", 2) == parse_expression("r{1,2}", 2)
    assert parse_expression("z{},{}", 2).is_zero()
    # overlapping multi-element second subset gives the zero element
    assert parse_expression("z{1},{1,2}", 2).is_zero()
    # Moebius transform pair
    assert parse_expression("u{1}", 2) == parse_expression("r{1}", 2)
    assert parse_expression("u{1,2}", 2) == parse_expression(
        "r{1,2} - r{1} - r{2}", 2
    )
    # symmetric elements: degree 0 is the unit, beyond the subset size zero
    assert parse_expression("L(0,{1,2})", 2) == WordSum.one(2)
    assert parse_expression("L(3,{1,2})", 2).is_zero()


def test_sign_and_product_forms():
    two = 2
    assert parse_expression("-r{1}", two) == -parse_expression("r{1}", two)
    assert parse_expression("(-r{1})", two) == -parse_expression("r{1}", two)
    assert parse_expression("3r{1}", two) == parse_expression("3*r{1}", two)
    assert parse_expression("r{1}(r{2})", two) == parse_expression(
        "r{1}*r{2}", two
    )
    assert parse_expression("1/2 1/3 r{1}", two) == parse_expression(
        "1/6 r{1}", two
    )


def test_known_relation_normalizes_to_zero():
    ctx = NormalizationContext(2)
    ws = parse_expression("z{1},{2}*z{},{1} - z{2},{1}*z{},{2}", 2)
    assert ctx.normalize(ws).render() == "0"


def test_render_parse_round_trip_is_stable():
    text = "3 r{1,2}r{1} - 1/2 r{2}r{2}"
    w = parse_expression(text, 2)
    canon = w.render()
    assert parse_expression(canon, 2) == w
    assert parse_expression(canon, 2).render() == canon


def test_round_trip_random_word_sums():
    rng = random.Random(7)
    n = 2
    for _ in range(40):
        terms = {}
        for _ in range(rng.randint(1, 4)):
            word = []
            for _ in range(rng.randint(0, 3)):
                i = rng.randint(1, n)
                rest = [j for j in range(1, n + 1) if j != i]
                a = mask_of(
                    {j for j in rest if rng.random() < 0.5}
                )
                word.append((a, i))
            coeff = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
            if coeff:
                terms[tuple(word)] = terms.get(tuple(word), Fraction(0)) + coeff
        w = WordSum(n, terms)
        assert parse_expression(w.render(), n) == w


CASES = [
    ("z{1},{1}", 5, (), "generator element must lie outside its subset"),
    ("q{1}", 0, ("'('", "'L'", "'r'", "'u'", "'z'", "integer"), None),
    ("z{1}", 4, ("','",), None),
    ("3/", 2, ("integer",), None),
    ("r{1,}", 4, ("integer",), None),
    ("(r{1}", 5, ("')'",), None),
    ("r{1} + ", 7, ("'('", "'L'", "'r'", "'u'", "'z'", "integer"), None),
    ("L(1,{1}", 7, ("')'",), None),
    ("--r{1}", 1, ("'('", "'L'", "'r'", "'u'", "'z'", "integer"), None),
    ("r{1} * -r{2}", 7, ("'('", "'L'", "'r'", "'u'", "'z'", "integer"), None),
]


@pytest.mark.parametrize("text,position,expected,message", CASES)
def test_parse_errors(text, position, expected, message):
    with pytest.raises(ParseError) as info:
        parse_ast(text)
    assert info.value.position == position
    assert info.value.expected == tuple(sorted(expected))
    if message is not None:
        assert info.value.message == message


def test_trailing_input_rejected():
    with pytest.raises(ParseError) as info:
        parse_ast("z{1},{2},{3}")
    assert info.value.position == 8
    assert "trailing input" in info.value.message


@pytest.mark.parametrize("text", ["r{3}", "L(1,{1,3})", "z{2},{3}"])
def test_out_of_range_subset_elements(text):
    with pytest.raises(ParseError) as info:
        parse_expression(text, 2)
    assert info.value.position == 0
    assert "outside 1..2" in info.value.message
