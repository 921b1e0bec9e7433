"""Recursive-descent parser for bracket entries and Casimir expressions.

Grammar (whitespace is insignificant)::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := ("-" | "+") unary | power
    power  := atom ("^" ["-" | "+"] INT | "^" "(" ["-"] INT ")")?
    atom   := INT | NAME | "i" | "sqrt" "(" INT ")" | "(" expr ")"
"""
from __future__ import annotations

import math
import re
from typing import Sequence

from ..scalar import Field, Scalar
from .poly import Ring
from .rational import RationalFn

__all__ = ["ParseError", "parse_expr", "parse_scalar", "sqrt_of_int"]

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\*\*|[-+*/^()]))")


class ParseError(ValueError):
    """Syntax or vocabulary error at a character offset."""

    def __init__(self, message: str, position: int, text: str = ""):
        self.position = position
        self.text = text
        super().__init__(f"{message} at position {position}" + (f" in {text!r}" if text else ""))


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos, text)
        start = m.start(m.lastindex)
        if m.group(1):
            tokens.append(("int", m.group(1), start))
        elif m.group(2):
            tokens.append(("name", m.group(2), start))
        else:
            op = m.group(3)
            tokens.append(("op", "^" if op == "**" else op, start))
        pos = m.end()
    tokens.append(("end", "", n))
    return tokens


def sqrt_of_int(fld: Field, value: int, position: int = 0, text: str = "") -> Scalar:
    """``sqrt(value)`` inside ``fld``, or a :class:`ParseError` if it is not representable."""
    if value < 0:
        raise ParseError("sqrt of a negative integer; write i*sqrt(n)", position, text)
    root = math.isqrt(value)
    if root * root == value:
        return fld.coerce(root)
    r = fld.radicand
    if r > 1 and value % r == 0:
        k2 = value // r
        k = math.isqrt(k2)
        if k * k == k2:
            return fld.sqrt() * k
    raise ParseError(f"sqrt({value}) is not in the coefficient field (radicand {r})",
                     position, text)


class _Parser:
    def __init__(self, text: str, ring: Ring):
        self.text = text
        self.ring = ring
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value: str):
        kind, val, pos = self.take()
        if val != value or kind != "op":
            raise ParseError(f"expected {value!r}, found {val or 'end of input'!r}", pos, self.text)

    def fail(self, message, pos):
        raise ParseError(message, pos, self.text)

    def parse(self) -> RationalFn:
        value = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            self.fail(f"unexpected {val!r}", pos)
        return value

    def expr(self):
        value = self.term()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                rhs = self.term()
                value = value + rhs if val == "+" else value - rhs
            else:
                return value

    def term(self):
        value = self.unary()
        while True:
            kind, val, pos = self.peek()
            if kind == "op" and val in "*/":
                self.take()
                rhs = self.unary()
                if val == "*":
                    value = value * rhs
                else:
                    if rhs.is_zero():
                        self.fail("division by zero", pos)
                    value = value / rhs
            else:
                return value

    def unary(self):
        kind, val, _ = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            inner = self.unary()
            return -inner if val == "-" else inner
        return self.power()

    def power(self):
        base = self.atom()
        kind, val, pos = self.peek()
        if kind == "op" and val == "^":
            self.take()
            exponent = self._exponent()
            if exponent < 0 and base.is_zero():
                self.fail("negative power of zero", pos)
            base = base ** exponent
            kind, val, pos = self.peek()
            if kind == "op" and val == "^":
                self.fail("chained exponents are not supported", pos)
        return base

    def _exponent(self) -> int:
        kind, val, pos = self.take()
        paren = False
        if kind == "op" and val == "(":
            paren = True
            kind, val, pos = self.take()
        sign = 1
        if kind == "op" and val in "+-":
            sign = -1 if val == "-" else 1
            kind, val, pos = self.take()
        if kind != "int":
            self.fail("exponent must be an integer", pos)
        if paren:
            self.expect(")")
        return sign * int(val)

    def atom(self):
        kind, val, pos = self.take()
        ring = self.ring
        if kind == "int":
            return RationalFn(ring.const(int(val)))
        if kind == "op" and val == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        if kind == "name":
            if val == "i":
                if not ring.field.imaginary:
                    self.fail("imaginary unit used but the field has imaginary=false", pos)
                return RationalFn(ring.const(ring.field.imag_unit()))
            if val == "sqrt":
                self.expect("(")
                k2, v2, p2 = self.take()
                if k2 != "int":
                    self.fail("nested or non-integer radicals are not supported", p2)
                self.expect(")")
                return RationalFn(ring.const(sqrt_of_int(ring.field, int(v2), p2, self.text)))
            if val in ring.coords:
                return RationalFn(ring.var(ring.coords.index(val)))
            self.fail(f"unknown variable {val!r}", pos)
        if kind == "end":
            self.fail("unexpected end of input", pos)
        self.fail(f"unexpected {val!r}", pos)


def parse_expr(text: str, ring: Ring) -> RationalFn:
    """Parse ``text`` into an exact :class:`RationalFn` over ``ring``."""
    if not isinstance(text, str):
        raise ParseError(f"expected an expression string, got {type(text).__name__}", 0)
    return _Parser(text, ring).parse()


def parse_scalar(text, fld: Field) -> Scalar:
    """Parse a constant expression (or pass through ints) into ``fld``."""
    if isinstance(text, int):
        return fld.coerce(text)
    ring = _const_ring(fld)
    value = parse_expr(str(text), ring)
    if not value.is_constant():
        raise ParseError("expected a constant", 0, str(text))
    return value.constant_value()


_CONST_RINGS: dict[Field, Ring] = {}


def _const_ring(fld: Field) -> Ring:
    ring = _CONST_RINGS.get(fld)
    if ring is None:
        ring = _CONST_RINGS[fld] = Ring(["_c"], fld)
    return ring
