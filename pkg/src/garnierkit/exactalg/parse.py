"""Plain-text expression syntax.

Grammar (``^`` binds tightest and is right associative; exponents are integers)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('+' | '-') unary | power
    power  := atom ('^' unary)?
    atom   := NUMBER ('/' NUMBER)? | NAME | '(' expr ')'

Variable names: q1 p1 q2 p2 t s k0 k1 kinf th1 th2.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .expression import Expression
from .poly import NVARS, VARIABLES, Poly

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


class ParseError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at position {pos}\n  {text}\n  {' ' * pos}^")
        self.text = text
        self.pos = pos


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        if m.group(1):
            out.append(("num", m.group(1), m.start(1)))
        elif m.group(2):
            out.append(("name", m.group(2), m.start(2)))
        elif m.group(3):
            out.append(("op", m.group(3), m.start(3)))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        return ParseError(msg, self.text, tok[2])

    def expect(self, op):
        tok = self.take()
        if tok[0] != "op" or tok[1] != op:
            raise self.error(f"expected {op!r}", tok)

    def parse(self) -> Expression:
        e = self.expr()
        if self.peek()[0] != "end":
            raise self.error("unexpected token")
        return e

    def expr(self):
        e = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            r = self.term()
            e = e + r if op == "+" else e - r
        return e

    def term(self):
        e = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            tok = self.take()
            r = self.unary()
            if tok[1] == "*":
                e = e * r
            else:
                if r.is_zero():
                    raise self.error("division by zero", tok)
                e = e / r
        return e

    def unary(self):
        tok = self.peek()
        if tok[0] == "op" and tok[1] in "+-":
            self.take()
            e = self.unary()
            return -e if tok[1] == "-" else e
        return self.power()

    def power(self):
        base = self.atom()
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "^":
            self.take()
            etok = self.peek()
            exp = self.unary()
            if not exp.is_constant() or exp.constant_value().denominator != 1:
                raise self.error("exponent must be an integer", etok)
            k = int(exp.constant_value())
            if k < 0 and base.is_zero():
                raise self.error("division by zero", etok)
            return base**k
        return base

    def atom(self):
        tok = self.take()
        kind, val, _ = tok
        if kind == "num":
            return Expression.const(Fraction(int(val)))
        if kind == "name":
            if val not in VARIABLES:
                raise self.error(f"unknown variable {val!r}", tok)
            return Expression.var(val)
        if kind == "op" and val == "(":
            e = self.expr()
            self.expect(")")
            return e
        if kind == "end":
            raise self.error("unexpected end of input", tok)
        raise self.error(f"unexpected {val!r}", tok)


def parse_expr(text: str) -> Expression:
    return _Parser(text).parse()


def parse_rational(text: str) -> Fraction:
    """Exact rational literal such as ``-3``, ``7/2``; floats are rejected."""
    t = text.strip()
    if not re.fullmatch(r"[+-]?\d+(/\d+)?", t):
        raise ParseError("expected an exact rational like 3 or -7/2", text, 0)
    try:
        return Fraction(t)
    except ZeroDivisionError:
        raise ParseError("zero denominator", text, t.index("/") + 1) from None


def _coef_text(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def poly_to_text(p: Poly) -> str:
    """Terms in ascending graded lexicographic order, e.g. ``q2 - q1``."""
    terms = list(p.terms.items())
    if not terms:
        return "0"
    parts = []
    for mono, c in reversed(terms):
        factors = []
        for i in range(NVARS):
            if mono[i] == 1:
                factors.append(VARIABLES[i])
            elif mono[i] > 1:
                factors.append(f"{VARIABLES[i]}^{mono[i]}")
        mag = abs(c)
        if not factors:
            body = _coef_text(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = _coef_text(mag) + "*" + "*".join(factors)
        if not parts:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append(("- " if c < 0 else "+ ") + body)
    return " ".join(parts)


def to_text(e: Expression) -> str:
    num = poly_to_text(e.num)
    if e.den.is_one():
        return num
    den = poly_to_text(e.den)
    if len(e.num) > 1:
        num = f"({num})"
    if len(e.den) > 1 or not _is_bare(e.den):
        den = f"({den})"
    return f"{num}/{den}"


def _is_bare(p: Poly) -> bool:
    # a single factor with coefficient 1 needs no parentheses after '/'
    (mono, c), = p.terms.items()
    return c == 1 and sum(1 for e in mono if e) <= 1 and "^" not in poly_to_text(p)
