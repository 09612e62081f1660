"""Exact scalars: rationals (``fractions.Fraction``) and elements of Q(sqrt(d)).

Rationals are plain :class:`~fractions.Fraction` objects.  A :class:`Quad`
always has a nonzero irrational part; arithmetic that cancels it collapses
back to a ``Fraction``, so an element with ``b == 0`` *is* the rational.
"""
from __future__ import annotations

import math
import re
from fractions import Fraction
from numbers import Rational
from typing import Union


class MixedExtensionError(ValueError):
    """Raised when two different quadratic extensions meet in one operation."""


def squarefree_part(n: int) -> tuple[int, int]:
    """Return ``(k, d)`` with ``n == k*k*d`` and ``d`` squarefree (sign kept in d)."""
    if n == 0:
        raise ValueError("zero has no squarefree part")
    m = abs(n)
    k, d = 1, -1 if n < 0 else 1
    p = 2
    while p * p <= m:
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        k *= p ** (e // 2)
        if e % 2:
            d *= p
        p += 1 if p == 2 else 2
    return k, d * m


_CHECKED_D: set[int] = set()


class Quad:
    """a + b*sqrt(d) with rational a, b (b != 0) and squarefree d not in {0, 1}."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b, d: int):
        self.a = Fraction(a)
        self.b = Fraction(b)
        self.d = int(d)
        if self.b == 0:
            raise ValueError("Quad needs a nonzero irrational part; use make()")
        if self.d not in _CHECKED_D:
            if self.d in (0, 1) or squarefree_part(self.d)[0] != 1:
                raise ValueError(f"d={d} is not a squarefree non-square")
            _CHECKED_D.add(self.d)

    @staticmethod
    def make(a, b, d: int) -> "Scalar":
        if b == 0:
            return Fraction(a)
        return Quad(a, b, d)

    # -- coercion -------------------------------------------------------
    def _parts(self, other):
        if isinstance(other, Quad):
            if other.d != self.d:
                raise MixedExtensionError(f"sqrt({self.d}) mixed with sqrt({other.d})")
            return other.a, other.b
        if isinstance(other, (int, Fraction, Rational)):
            return Fraction(other), Fraction(0)
        return None

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return Quad.make(self.a + p[0], self.b + p[1], self.d)

    __radd__ = __add__

    def __neg__(self):
        return Quad(-self.a, -self.b, self.d)

    def __pos__(self):
        return self

    def __sub__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return Quad.make(self.a - p[0], self.b - p[1], self.d)

    def __rsub__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return Quad.make(p[0] - self.a, p[1] - self.b, self.d)

    def __mul__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        c, e = p
        return Quad.make(self.a * c + self.b * e * self.d, self.a * e + self.b * c, self.d)

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        return self.a * self.a - self.d * self.b * self.b

    def conjugate(self) -> "Quad":
        return Quad(self.a, -self.b, self.d)

    def inverse(self) -> "Quad":
        n = self.norm()
        return Quad(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other):
        if isinstance(other, Quad):
            self._parts(other)
            return self * other.inverse()
        p = self._parts(other)
        if p is None:
            return NotImplemented
        if p[0] == 0:
            raise ZeroDivisionError("division by zero")
        return Quad(self.a / p[0], self.b / p[0], self.d)

    def __rtruediv__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return self.inverse() * p[0]

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return (self.inverse()) ** (-k)
        result: Scalar = Fraction(1)
        base: Scalar = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- comparison -----------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Quad):
            return self.d == other.d and self.a == other.a and self.b == other.b
        if isinstance(other, (int, Fraction)):
            return False
        return NotImplemented

    def __hash__(self):
        return hash(("Quad", self.a, self.b, self.d))

    def __bool__(self):
        return True

    def is_real(self) -> bool:
        return self.d > 0

    def __float__(self):
        if self.d < 0:
            raise TypeError("non-real quadratic element")
        return float(self.a) + float(self.b) * math.sqrt(self.d)

    def __complex__(self):
        return complex(float(self.a), 0) + float(self.b) * complex(self.d) ** 0.5

    def __repr__(self):
        return f"Quad({self.a}, {self.b}, {self.d})"

    def __str__(self):
        return format_scalar(self)


Scalar = Union[Fraction, Quad]


def as_scalar(v) -> Scalar:
    if isinstance(v, Quad):
        return v
    if isinstance(v, str):
        return parse_scalar(v)
    return Fraction(v)


def conj(v: Scalar) -> Scalar:
    """Complex conjugate; identity on rationals and real extensions."""
    if isinstance(v, Quad) and v.d < 0:
        return v.conjugate()
    return v


def extension_of(values) -> int | None:
    """The common d of all Quad values (None if all rational)."""
    d = None
    for v in values:
        if isinstance(v, Quad):
            if d is None:
                d = v.d
            elif d != v.d:
                raise MixedExtensionError(f"sqrt({d}) mixed with sqrt({v.d})")
    return d


def sqrt_rational(q) -> Scalar:
    """Exact square root of a rational, as a Fraction or a Quad."""
    q = Fraction(q)
    if q == 0:
        return Fraction(0)
    num, den = q.numerator, q.denominator
    # sqrt(num/den) = sqrt(num*den)/den
    k, d = squarefree_part(num * den)
    if d == 1:
        return Fraction(k, den)
    return Quad(0, Fraction(k, den), d)


def is_rational(v) -> bool:
    return not isinstance(v, Quad)


def format_scalar(v) -> str:
    if isinstance(v, Quad):
        sign = "+" if v.b > 0 else "-"
        return f"{v.a}{sign}{abs(v.b)}*sqrt({v.d})"
    return str(Fraction(v))


_FRAC = r"-?\d+(?:/\d+)?"
_QUAD_RE = re.compile(rf"^\s*({_FRAC})\s*([+-])\s*(\d+(?:/\d+)?)\s*\*\s*sqrt\(\s*(-?\d+)\s*\)\s*$")
_FRAC_RE = re.compile(rf"^\s*({_FRAC})\s*$")


def parse_scalar(text: str) -> Scalar:
    """Inverse of :func:`format_scalar`: ``"p/q"`` or ``"p/q+r/s*sqrt(d)"``."""
    m = _FRAC_RE.match(text)
    if m:
        return Fraction(m.group(1))
    m = _QUAD_RE.match(text)
    if m:
        b = Fraction(m.group(3))
        if m.group(2) == "-":
            b = -b
        return Quad.make(Fraction(m.group(1)), b, int(m.group(4)))
    raise ValueError(f"not an exact scalar: {text!r}")
