"""Parser for polynomial expressions in x with exact coefficients.

Grammar (whitespace ignored)::

    expr    := term (("+" | "-") term)*
    term    := unary (("*" | "/") unary)*
    unary   := ("-" | "+") unary | power
    power   := atom ("^" INT)?
    atom    := INT | "x" | "(" expr ")" | "sqrt" "(" ["-"] INT ")"

Division is allowed only by nonzero constants, so "5/2*x" and "x/3" parse
but "1/x" does not.
"""
from __future__ import annotations

import re
from fractions import Fraction

from .exactalg import Polynomial, Scalar, as_scalar, sqrt_rational

MAX_EXPONENT = 256

_TOKEN = re.compile(r"\s*(?:(\d+)|(sqrt)|([A-Za-z_]\w*)|(\S))")


class ParseError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at position {pos}: {text!r}")
        self.pos = pos
        self.text = text


class _Parser:
    def __init__(self, text: str, var: str | None, env: dict | None = None):
        self.text = text
        self.var = var
        self.env = env or {}
        self.toks: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if m is None:  # only trailing whitespace left
                break
            start = m.start(m.lastindex)
            if m.group(1):
                self.toks.append(("int", m.group(1), start))
            elif m.group(2):
                self.toks.append(("sqrt", "sqrt", start))
            elif m.group(3):
                name = m.group(3)
                if name in self.env:
                    self.toks.append(("name", name, start))
                elif name == var:
                    self.toks.append(("var", var, start))
                else:
                    raise ParseError(f"unknown name {name!r}", text, start)
            else:
                self.toks.append(("op", m.group(4), start))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else ("eof", "", len(self.text))

    def take(self):
        t = self.peek()
        self.i += 1
        return t

    def expect(self, value: str):
        t = self.take()
        if t[1] != value:
            raise ParseError(f"expected {value!r}", self.text, t[2])
        return t

    def parse(self) -> Polynomial:
        if not self.toks:
            raise ParseError("empty expression", self.text, 0)
        p = self.expr()
        t = self.peek()
        if t[0] != "eof":
            raise ParseError(f"unexpected {t[1]!r}", self.text, t[2])
        return p

    def expr(self) -> Polynomial:
        p = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self) -> Polynomial:
        p = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in ("*", "/"):
            op = self.take()[1]
            pos = self.peek()[2]
            q = self.unary()
            if op == "*":
                p = p * q
            else:
                if q.is_zero():
                    raise ParseError("division by zero", self.text, pos)
                if q.degree != 0:
                    raise ParseError("division by a non-constant", self.text, pos)
                p = p * (1 / q[0])
        return p

    def unary(self) -> Polynomial:
        t = self.peek()
        if t[0] == "op" and t[1] in ("-", "+"):
            self.take()
            p = self.unary()
            return -p if t[1] == "-" else p
        return self.power()

    def power(self) -> Polynomial:
        base = self.atom()
        if self.peek()[1] == "^" and self.peek()[0] == "op":
            self.take()
            t = self.take()
            if t[0] != "int":
                raise ParseError("exponent must be a non-negative integer", self.text, t[2])
            k = int(t[1])
            if k > MAX_EXPONENT:
                raise ParseError(f"exponent {k} exceeds {MAX_EXPONENT}", self.text, t[2])
            return base ** k
        return base

    def atom(self) -> Polynomial:
        t = self.take()
        kind, val, pos = t
        if kind == "int":
            return Polynomial.const(int(val))
        if kind == "var":
            return Polynomial.x()
        if kind == "name":
            return Polynomial.const(self.env[val])
        if kind == "sqrt":
            self.expect("(")
            sign = 1
            if self.peek()[1] == "-":
                self.take()
                sign = -1
            n = self.take()
            if n[0] != "int":
                raise ParseError("sqrt takes an integer", self.text, n[2])
            self.expect(")")
            return Polynomial.const(sqrt_rational(sign * int(n[1])))
        if val == "(":
            p = self.expr()
            self.expect(")")
            return p
        if kind == "eof":
            raise ParseError("unexpected end of input", self.text, pos)
        raise ParseError(f"unexpected {val!r}", self.text, pos)


def parse_poly(text: str, var: str = "x") -> Polynomial:
    return _Parser(text, var).parse()


def evaluate(text: str, env: dict) -> Scalar:
    """Evaluate a constant expression whose names are bound in env."""
    p = _Parser(text, None, {k: as_scalar(v) for k, v in env.items()}).parse()
    return p[0]


def parse_value(text: str) -> Scalar:
    """A constant expression such as "-2/9" or "1/2+1/3*sqrt(-15)"."""
    p = parse_poly(text)
    if p.degree > 0:
        raise ParseError("expected a constant", text, 0)
    return p[0]


def parse_fraction(text: str) -> Fraction:
    v = parse_value(text)
    if not isinstance(v, Fraction):
        raise ParseError("expected a rational number", text, 0)
    return v
