"""Tokenizer and recursive-descent parser for the expression grammar.

    expr   := term (("+"|"-") term)*
    term   := factor (("*"|"/") factor)*
    factor := ("-"|"+") factor | atom ("^" integer)?
    atom   := number | symbol | func "(" expr ")" | "(" expr ")"
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .expr import FUNCTIONS, Const, Expr, Sym, add, func, mul, neg, power


class ExprError(ValueError):
    """Base class for parse errors; ``offset`` is the byte offset in the source."""

    def __init__(self, message: str, offset: int, source: str = ""):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset
        self.source = source


class LexError(ExprError):
    pass


class ParseError(ExprError):
    pass


class UnknownSymbolError(ExprError):
    pass


_TOKEN = re.compile(
    r"(?P<ws>\s+)"
    r"|(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<id>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>[-+*/^()])"
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    offset: int


def tokenize(source: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(source):
        m = _TOKEN.match(source, pos)
        if m is None:
            raise LexError(f"unexpected character {source[pos]!r}", _byte_offset(source, pos), source)
        if m.lastgroup != "ws":
            tokens.append(Token(m.lastgroup, m.group(), _byte_offset(source, pos)))
        pos = m.end()
    tokens.append(Token("end", "", _byte_offset(source, len(source))))
    return tokens


def _byte_offset(source: str, index: int) -> int:
    return len(source[:index].encode("utf-8"))


class _Parser:
    def __init__(self, source: str, chart: Sequence[str], params: Sequence[str]):
        self.source = source
        self.tokens = tokenize(source)
        self.pos = 0
        self.chart = set(chart)
        self.params = set(params)

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def take(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, text: str) -> Token:
        tok = self.peek()
        if tok.text != text or tok.kind == "num":
            raise ParseError(f"expected {text!r}, found {tok.text or 'end of input'!r}",
                             tok.offset, self.source)
        return self.take()

    def parse(self) -> Expr:
        e = self.expr()
        tok = self.peek()
        if tok.kind != "end":
            raise ParseError(f"unexpected {tok.text!r}", tok.offset, self.source)
        return e

    def expr(self) -> Expr:
        terms = [self.term()]
        while self.peek().kind == "op" and self.peek().text in "+-":
            op = self.take().text
            t = self.term()
            terms.append(t if op == "+" else neg(t))
        return add(*terms) if len(terms) > 1 else terms[0]

    def term(self) -> Expr:
        factors = [self.factor()]
        while self.peek().kind == "op" and self.peek().text in "*/":
            op = self.take().text
            f = self.factor()
            factors.append(f if op == "*" else power(f, -1))
        return mul(*factors) if len(factors) > 1 else factors[0]

    def factor(self) -> Expr:
        tok = self.peek()
        if tok.kind == "op" and tok.text in "+-":
            self.take()
            inner = self.factor()
            return neg(inner) if tok.text == "-" else inner
        base = self.atom()
        if self.peek().text == "^" and self.peek().kind == "op":
            self.take()
            return power(base, self.integer())
        return base

    def integer(self) -> int:
        tok = self.take()
        sign = 1
        if tok.kind == "op" and tok.text in "+-":
            sign = -1 if tok.text == "-" else 1
            tok = self.take()
        if tok.kind != "num" or not tok.text.isdigit():
            raise ParseError("exponent must be an integer literal", tok.offset, self.source)
        return sign * int(tok.text)

    def atom(self) -> Expr:
        tok = self.take()
        if tok.kind == "num":
            return Const(Fraction(tok.text))
        if tok.kind == "id":
            if tok.text in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return func(tok.text, arg)
            if tok.text in self.chart:
                return Sym(tok.text, True)
            if tok.text in self.params:
                return Sym(tok.text, False)
            raise UnknownSymbolError(f"unknown symbol {tok.text!r}", tok.offset, self.source)
        if tok.kind == "op" and tok.text == "(":
            e = self.expr()
            self.expect(")")
            return e
        raise ParseError(f"unexpected {tok.text or 'end of input'!r}", tok.offset, self.source)


def parse(source: str, chart: Sequence[str], params: Sequence[str] = ()) -> Expr:
    """Parse ``source`` over the given coordinate names and parameter names."""
    overlap = set(chart) & set(params)
    if overlap:
        raise ValueError(f"names used as both coordinate and parameter: {sorted(overlap)}")
    bad = [n for n in list(chart) + list(params) if n in FUNCTIONS]
    if bad:
        raise ValueError(f"function names cannot be symbols: {bad}")
    return _Parser(source, chart, params).parse()
