"""Text syntax for scalars, shared by every division context.

Grammar (whitespace insensitive)::

    expr   := term (('+'|'-') term)*
    term   := unary (('*'|'/') unary)*
    unary  := '-' unary | power
    power  := atom ['^' INT]
    atom   := INT | NAME | '(' expr ')' | matrix
    matrix := '[' row (',' row)* ']'        (matrix contexts only)
    row    := '[' expr (',' expr)* ']'

Which NAME atoms exist depends on the context: ``x`` for rational
functions and matrices over them, ``i j k`` for quaternions, none for
plain rationals.  ``a / b`` means ``a * b^-1`` (inverse on the right);
the distinction only matters in noncommutative contexts.  ``^`` takes a
nonnegative integer literal.
"""

from __future__ import annotations

from fractions import Fraction

from ..errors import NotInvertible, ParseError

_SYMBOLS = "+-*/^()[],"


def _tokenize(text):
    toks = []
    pos = 0
    while pos < len(text):
        ch = text[pos]
        if ch.isspace():
            pos += 1
            continue
        if ch.isdigit():
            start = pos
            while pos < len(text) and text[pos].isdigit():
                pos += 1
            toks.append(("INT", int(text[start:pos]), start))
            continue
        if ch.isalpha():
            start = pos
            while pos < len(text) and text[pos].isalpha():
                pos += 1
            toks.append(("NAME", text[start:pos], start))
            continue
        if ch in _SYMBOLS:
            toks.append((ch, ch, pos))
            pos += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", pos)
    toks.append(("END", None, len(text)))
    return toks


class _ScalarParser:
    def __init__(self, ctx, text):
        self.ctx = ctx
        self.toks = _tokenize(text)
        self.k = 0

    def peek(self):
        return self.toks[self.k]

    def take(self, kind):
        tok = self.toks[self.k]
        if tok[0] != kind:
            raise ParseError(f"expected {kind}", tok[2], expected=(kind,))
        self.k += 1
        return tok

    def parse(self):
        value = self.expr()
        tok = self.peek()
        if tok[0] != "END":
            raise ParseError("trailing input", tok[2], expected=("END",))
        return value

    def expr(self):
        value = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.take(self.peek()[0])[0]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.unary()
        while self.peek()[0] in ("*", "/"):
            op, _, pos = self.peek()
            self.k += 1
            rhs = self.unary()
            if op == "*":
                value = value * rhs
            else:
                try:
                    value = value * self.ctx.invert(rhs)
                except NotInvertible:
                    raise ParseError("division by a non-invertible value", pos) from None
        return value

    def unary(self):
        if self.peek()[0] == "-":
            self.k += 1
            return -self.unary()
        return self.power()

    def power(self):
        value = self.atom()
        if self.peek()[0] == "^":
            self.k += 1
            tok = self.take("INT")
            out = self.ctx.one
            for _ in range(tok[1]):
                out = out * value
            return out
        return value

    def atom(self):
        kind, val, pos = self.peek()
        if kind == "INT":
            self.k += 1
            return self.ctx.from_rational(Fraction(val))
        if kind == "NAME":
            atoms = self.ctx.atom_names
            if val not in atoms:
                raise ParseError(f"unknown name {val!r}", pos, expected=tuple(atoms))
            self.k += 1
            return atoms[val]
        if kind == "(":
            self.k += 1
            value = self.expr()
            self.take(")")
            return value
        if kind == "[":
            if self.ctx.matrix_entry_context is None:
                raise ParseError("matrix literal not allowed in this context", pos)
            return self.matrix()
        raise ParseError("expected a value", pos, expected=("INT", "NAME", "(", "["))

    def matrix(self):
        pos = self.peek()[2]
        self.take("[")
        rows = [self.row()]
        while self.peek()[0] == ",":
            self.k += 1
            rows.append(self.row())
        self.take("]")
        try:
            return self.ctx.from_entries(rows)
        except (ValueError, TypeError) as exc:
            raise ParseError(f"bad matrix literal: {exc}", pos) from None

    def row(self):
        self.take("[")
        entry_ctx = self.ctx.matrix_entry_context
        saved_ctx = self.ctx
        self.ctx = entry_ctx
        try:
            entries = [self.expr()]
            while self.peek()[0] == ",":
                self.k += 1
                entries.append(self.expr())
        finally:
            self.ctx = saved_ctx
        self.take("]")
        return entries


def parse_scalar(ctx, text: str):
    """Parse ``text`` as a scalar of the given division context."""
    return _ScalarParser(ctx, text).parse()
