"""Pratt parser for rational functions with coefficients in a square-root tower.

Grammar: the variable z (or x), integers, i, sqrt(<rational>), the binary
operators + - * / and ^ (or **) with integer exponents, unary minus and
parentheses.  Whitespace is ignored.
"""
from __future__ import annotations

import re

from .errors import ExpressionSyntaxError, RatsymError
from .field import I, TowerElement, Tower
from .poly import Poly
from .ratfunc import RatFunc


class UnknownSymbol(RatsymError, ValueError):
    def __init__(self, name, offset):
        super().__init__(f"unknown symbol {name!r} at offset {offset}")
        self.name = name
        self.offset = offset


TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_]\w*)|(\*\*|[-+*/^()]))")
VARIABLES = ("z", "x")

# binding powers
ADD, MUL, NEG, POW = 10, 20, 25, 30


class _Token:
    def __init__(self, kind, text, offset):
        self.kind = kind        # "num", "name", "op" or "end"
        self.text = text
        self.offset = offset

    @property
    def lbp(self) -> int:
        if self.kind != "op":
            return 0
        return {"+": ADD, "-": ADD, "*": MUL, "/": MUL, "^": POW, "**": POW}.get(self.text, 0)


def tokenize(text: str) -> list[_Token]:
    out, pos = [], 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = TOKEN.match(text, pos)
        if not m:
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ExpressionSyntaxError(f"unexpected character {text[bad]!r}", bad)
        num, name, op = m.groups()
        start = m.start(m.lastindex)
        if num:
            out.append(_Token("num", num, start))
        elif name:
            out.append(_Token("name", name, start))
        else:
            out.append(_Token("op", "^" if op == "**" else op, start))
        pos = m.end()
    out.append(_Token("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0

    @property
    def token(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        t = self.token
        self.pos += 1
        return t

    def expect(self, text: str):
        t = self.token
        if t.kind != "op" or t.text != text:
            raise ExpressionSyntaxError(f"expected {text!r}", t.offset)
        self.pos += 1

    def expression(self, rbp: int = 0) -> RatFunc:
        left = self.nud(self.advance())
        while rbp < self.token.lbp:
            left = self.led(self.advance(), left)
        return left

    def nud(self, t: _Token) -> RatFunc:
        if t.kind == "num":
            return RatFunc(Poly([int(t.text)]))
        if t.kind == "name":
            if t.text in VARIABLES:
                return RatFunc.z()
            if t.text == "i":
                return RatFunc(Poly([I]))
            if t.text == "sqrt":
                self.expect("(")
                start = self.token.offset
                arg = self.expression()
                self.expect(")")
                return RatFunc(Poly([_sqrt(arg, start)]))
            raise UnknownSymbol(t.text, t.offset)
        if t.kind == "op":
            if t.text == "(":
                inner = self.expression()
                self.expect(")")
                return inner
            if t.text == "-":
                return -self.expression(NEG)
            if t.text == "+":
                return self.expression(NEG)
        raise ExpressionSyntaxError("unexpected end of input" if t.kind == "end" else f"unexpected {t.text!r}", t.offset)

    def led(self, t: _Token, left: RatFunc) -> RatFunc:
        if t.text == "+":
            return left + self.expression(ADD)
        if t.text == "-":
            return left - self.expression(ADD)
        if t.text == "*":
            return left * self.expression(MUL)
        if t.text == "/":
            right = self.expression(MUL)
            if right.num.is_zero():
                raise ExpressionSyntaxError("division by zero", t.offset)
            return left / right
        # right associative; the exponent must be an integer constant
        start = self.token.offset
        e = self.expression(POW - 1)
        return left ** _integer(e, start)


def _constant(f: RatFunc, offset: int) -> TowerElement:
    if f.num.degree > 0 or f.den.degree > 0:
        raise ExpressionSyntaxError("expected a constant", offset)
    return f.num[0] / f.den[0]


def _integer(f: RatFunc, offset: int) -> int:
    c = _constant(f, offset)
    if not c.is_rational() or c.rational().denominator != 1:
        raise ExpressionSyntaxError("exponent must be an integer", offset)
    return int(c.rational())


def _sqrt(f: RatFunc, offset: int) -> TowerElement:
    c = _constant(f, offset)
    if not c.is_rational():
        raise ExpressionSyntaxError("sqrt takes a rational argument", offset)
    q = c.rational()
    return TowerElement.sqrt_int(q.numerator * q.denominator) / q.denominator


def parse_expression(text: str, tower: Tower | None = None) -> RatFunc:
    """Parse ``text`` into a RatFunc; new radicals are adjoined to ``tower``."""
    return parse_with_tower(text, tower)[0]


def parse_with_tower(text: str, tower: Tower | None = None) -> tuple[RatFunc, Tower]:
    p = _Parser(text)
    f = p.expression()
    if p.token.kind != "end":
        raise ExpressionSyntaxError(f"unexpected {p.token.text!r}", p.token.offset)
    tower = tower if tower is not None else Tower([])
    tower = tower.extended_by(*f.elements())
    return f, tower


__all__ = ["parse_expression", "parse_with_tower", "tokenize", "UnknownSymbol"]
