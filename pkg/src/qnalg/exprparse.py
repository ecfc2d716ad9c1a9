"""Parser for algebra expressions over the subset-indexed generators.

Grammar (whitespace insignificant, LL(1))::

    expr    := ['-'] term (('+'|'-') term)*
    term    := factor (['*'] factor)*
    factor  := rational | gen | lambda | '(' expr ')'
    gen     := 'z' subset ',' subset | 'r' subset | 'u' subset
    lambda  := 'L' '(' int ',' subset ')'
    subset  := '{' [int (',' int)*] '}'
    rational:= int ['/' int]

Multiplication may be written with '*' or by juxtaposition ("3 r{1}"
and "r{1,2}r{1}" both parse), so everything the canonical renderers
emit round-trips.  A single leading '-' is allowed at the start of an
expression (also directly inside parentheses).

Atoms map onto the free word layer:

    z{A},{i}   generator word (the element i must lie outside A)
    z{A},{B}   for |B| != 1: the Moebius sum of u(D) over B <= D <= A+B
               (zero when A and B intersect)
    r{A}       ascending chain expansion of the subset sum
    u{B}       top Moebius transform of r
    L(k,{A})   descending-product expansion of the symmetric element

Parsing yields an AST whose nodes carry source spans (spans are
ignored by equality), and `parse_expression` folds the AST into a
WordSum over a given ground-set size after range-checking every
subset element.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ParseError
from .qn import WordSum, lambda_word, r_word, u_word, validate_gen_index
from .strings import bit, elems, mask_size

_SYMBOLS = "+-*/(){},"

# Atom-opening token kinds, used both for implicit multiplication and
# for "expected" sets in errors.
_FACTOR_START = ("integer", "'z'", "'r'", "'u'", "'L'", "'('")


@dataclass(frozen=True)
class Token:
    kind: str  # "INT", "NAME", one of _SYMBOLS, or "END"
    text: str
    start: int
    end: int


def tokenize(text: str) -> list[Token]:
    toks = []
    pos = 0
    size = len(text)
    while pos < size:
        ch = text[pos]
        if ch.isspace():
            pos += 1
            continue
        if ch.isdigit():
            start = pos
            while pos < size and text[pos].isdigit():
                pos += 1
            toks.append(Token("INT", text[start:pos], start, pos))
            continue
        if ch.isalpha():
            start = pos
            while pos < size and text[pos].isalpha():
                pos += 1
            name = text[start:pos]
            if name not in ("z", "r", "u", "L"):
                raise ParseError(
                    f"unknown name {name!r}", start, expected=_FACTOR_START
                )
            toks.append(Token("NAME", name, start, pos))
            continue
        if ch in _SYMBOLS:
            toks.append(Token(ch, ch, pos, pos + 1))
            pos += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", pos)
    toks.append(Token("END", "", size, size))
    return toks


# -- AST ----------------------------------------------------------------
#
# Spans are (start, end) offsets into the source text.  They identify
# where a node came from for error reports but play no part in
# equality, so re-parsing a rendering of an expression can reproduce
# the same tree.


@dataclass(frozen=True)
class RationalNode:
    value: Fraction
    span: tuple[int, int] = field(compare=False)


@dataclass(frozen=True)
class ZNode:
    a_mask: int
    b_mask: int
    span: tuple[int, int] = field(compare=False)


@dataclass(frozen=True)
class RNode:
    a_mask: int
    span: tuple[int, int] = field(compare=False)


@dataclass(frozen=True)
class UNode:
    b_mask: int
    span: tuple[int, int] = field(compare=False)


@dataclass(frozen=True)
class LambdaNode:
    k: int
    a_mask: int
    span: tuple[int, int] = field(compare=False)


@dataclass(frozen=True)
class ProductNode:
    factors: tuple
    span: tuple[int, int] = field(compare=False)


@dataclass(frozen=True)
class SumNode:
    # terms are (sign, node) pairs with sign +1 or -1
    terms: tuple
    span: tuple[int, int] = field(compare=False)


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = tokenize(text)
        self.pos = 0

    def peek(self) -> Token:
        return self.toks[self.pos]

    def advance(self) -> Token:
        tok = self.toks[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str, label: str) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            raise ParseError(
                f"expected {label}, found {tok.text or 'end of input'!r}",
                tok.start,
                expected=(label,),
            )
        return self.advance()

    # -- grammar productions ------------------------------------------

    def parse(self):
        node = self.expr()
        tok = self.peek()
        if tok.kind != "END":
            raise ParseError(
                f"trailing input {tok.text!r}",
                tok.start,
                expected=("'+'", "'-'", "'*'", "end of input"),
            )
        return node

    def expr(self):
        start = self.peek().start
        terms = []
        sign = 1
        if self.peek().kind == "-":
            self.advance()
            sign = -1
        terms.append((sign, self.term()))
        while self.peek().kind in ("+", "-"):
            op = self.advance()
            terms.append((1 if op.kind == "+" else -1, self.term()))
        if len(terms) == 1 and terms[0][0] == 1:
            return terms[0][1]
        end = terms[-1][1].span[1]
        return SumNode(tuple(terms), (start, end))

    def term(self):
        start = self.peek().start
        factors = [self.factor()]
        while True:
            tok = self.peek()
            if tok.kind == "*":
                self.advance()
                factors.append(self.factor())
            elif tok.kind in ("INT", "NAME", "("):
                # juxtaposition
                factors.append(self.factor())
            else:
                break
        if len(factors) == 1:
            return factors[0]
        return ProductNode(tuple(factors), (start, factors[-1].span[1]))

    def factor(self):
        tok = self.peek()
        if tok.kind == "INT":
            return self.rational()
        if tok.kind == "NAME":
            if tok.text == "z":
                return self.z_atom()
            if tok.text == "r":
                self.advance()
                a_mask, end = self.subset()
                return RNode(a_mask, (tok.start, end))
            if tok.text == "u":
                self.advance()
                b_mask, end = self.subset()
                return UNode(b_mask, (tok.start, end))
            self.advance()  # 'L'
            self.expect("(", "'('")
            k_tok = self.expect("INT", "integer")
            self.expect(",", "','")
            a_mask, _ = self.subset()
            close = self.expect(")", "')'")
            return LambdaNode(int(k_tok.text), a_mask, (tok.start, close.end))
        if tok.kind == "(":
            self.advance()
            node = self.expr()
            close = self.expect(")", "')'")
            # Reuse the node but widen the span to the parentheses.
            return _respan(node, (tok.start, close.end))
        raise ParseError(
            f"expected an expression, found {tok.text or 'end of input'!r}",
            tok.start,
            expected=_FACTOR_START,
        )

    def rational(self):
        num = self.expect("INT", "integer")
        end = num.end
        value = Fraction(int(num.text))
        if self.peek().kind == "/":
            self.advance()
            den = self.expect("INT", "integer")
            if int(den.text) == 0:
                raise ParseError("zero denominator", den.start)
            value = Fraction(int(num.text), int(den.text))
            end = den.end
        return RationalNode(value, (num.start, end))

    def z_atom(self):
        z_tok = self.advance()
        a_mask, _ = self.subset()
        self.expect(",", "','")
        b_start = self.peek().start
        b_mask, end = self.subset()
        if mask_size(b_mask) == 1 and (a_mask & b_mask):
            raise ParseError(
                "generator element must lie outside its subset",
                b_start,
            )
        return ZNode(a_mask, b_mask, (z_tok.start, end))

    def subset(self) -> tuple[int, int]:
        self.expect("{", "'{'")
        mask = 0
        if self.peek().kind == "INT":
            while True:
                tok = self.advance()
                value = int(tok.text)
                if value < 1:
                    raise ParseError(
                        "subset elements are positive integers", tok.start
                    )
                mask |= bit(value)
                if self.peek().kind != ",":
                    break
                self.advance()
                if self.peek().kind != "INT":
                    nxt = self.peek()
                    raise ParseError(
                        f"expected integer, found {nxt.text or 'end of input'!r}",
                        nxt.start,
                        expected=("integer",),
                    )
        close = self.expect("}", "'}'")
        return mask, close.end


def _respan(node, span):
    cls = type(node)
    kwargs = {f: getattr(node, f) for f in node.__dataclass_fields__}
    kwargs["span"] = span
    return cls(**kwargs)


def parse_ast(text: str):
    """Parse text to an AST without binding a ground-set size."""
    return _Parser(text).parse()


def _check_mask(mask: int, n: int, span, what: str) -> None:
    for e in elems(mask):
        if e > n:
            raise ParseError(
                f"{what} element {e} outside 1..{n}", span[0]
            )


def _z_words(n: int, a_mask: int, b_mask: int) -> WordSum:
    if mask_size(b_mask) == 1:
        (i,) = elems(b_mask)
        validate_gen_index(n, a_mask, i)
        return WordSum.gen(n, a_mask, i)
    if a_mask & b_mask:
        return WordSum.zero(n)
    out = WordSum.zero(n)
    for extra_bits in range(1 << mask_size(a_mask)):
        extra = 0
        for idx, e in enumerate(elems(a_mask)):
            if extra_bits & (1 << idx):
                extra |= bit(e)
        out = out + u_word(n, b_mask | extra)
    return out


def to_word_sum(node, n: int) -> WordSum:
    """Fold an AST into the free word layer over ground-set size n."""
    if isinstance(node, RationalNode):
        return WordSum.one(n).scale(node.value)
    if isinstance(node, ZNode):
        _check_mask(node.a_mask | node.b_mask, n, node.span, "subset")
        return _z_words(n, node.a_mask, node.b_mask)
    if isinstance(node, RNode):
        _check_mask(node.a_mask, n, node.span, "subset")
        return r_word(n, node.a_mask)
    if isinstance(node, UNode):
        _check_mask(node.b_mask, n, node.span, "subset")
        return u_word(n, node.b_mask)
    if isinstance(node, LambdaNode):
        _check_mask(node.a_mask, n, node.span, "subset")
        return lambda_word(n, node.k, node.a_mask)
    if isinstance(node, ProductNode):
        out = WordSum.one(n)
        for f in node.factors:
            out = out * to_word_sum(f, n)
        return out
    if isinstance(node, SumNode):
        out = WordSum.zero(n)
        for sign, sub in node.terms:
            part = to_word_sum(sub, n)
            out = out + (part if sign > 0 else -part)
        return out
    raise TypeError(f"not an AST node: {node!r}")


def parse_expression(text: str, n: int) -> WordSum:
    """Parse text and fold it into a WordSum over ground-set size n."""
    return to_word_sum(parse_ast(text), n)
