"""Dense univariate polynomials and rational functions over exact scalars.

Coefficients are stored lowest degree first.  The zero polynomial has an
empty coefficient tuple and degree -1.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

from .scalars import Quad, Scalar, as_scalar, extension_of, format_scalar, sqrt_rational


def _coerce(c) -> Scalar:
    if isinstance(c, (Fraction, Quad)):
        return c
    return as_scalar(c)


class Polynomial:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [_coerce(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Scalar, ...] = tuple(cs)

    # -- constructors ---------------------------------------------------
    @classmethod
    def x(cls) -> "Polynomial":
        return cls((0, 1))

    @classmethod
    def const(cls, c) -> "Polynomial":
        return cls((c,))

    @classmethod
    def monomial(cls, k: int, c=1) -> "Polynomial":
        return cls([0] * k + [c])

    @classmethod
    def from_roots(cls, roots: Iterable, lc=1) -> "Polynomial":
        p = cls.const(lc)
        for r in roots:
            p = p * cls((-_coerce(r), 1))
        return p

    @staticmethod
    def lift(v) -> "Polynomial":
        return v if isinstance(v, Polynomial) else Polynomial.const(v)

    # -- basic queries --------------------------------------------------
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    @property
    def lc(self) -> Scalar:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __getitem__(self, i: int) -> Scalar:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return Fraction(0)

    def is_rational(self) -> bool:
        return all(not isinstance(c, Quad) for c in self.coeffs)

    def field(self) -> int | None:
        return extension_of(self.coeffs)

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, Polynomial):
            if isinstance(other, RationalFunction):
                return NotImplemented
            other = Polynomial.const(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return Polynomial(out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(-c for c in self.coeffs)

    def __sub__(self, other):
        if isinstance(other, RationalFunction):
            return NotImplemented
        return self + (-Polynomial.lift(other))

    def __rsub__(self, other):
        return Polynomial.lift(other) - self

    def __mul__(self, other):
        if isinstance(other, RationalFunction):
            return NotImplemented
        if not isinstance(other, Polynomial):
            c = _coerce(other)
            if c == 0:
                return Polynomial()
            return Polynomial(x * c for x in self.coeffs)
        if self.is_zero() or other.is_zero():
            return Polynomial()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Polynomial":
        if not isinstance(k, int) or k < 0:
            raise ValueError("polynomial powers must be non-negative integers")
        result = Polynomial.const(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __divmod__(self, other) -> tuple["Polynomial", "Polynomial"]:
        other = Polynomial.lift(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return Polynomial(), self
        quo = [Fraction(0)] * (dq + 1)
        inv_lc = 1 / other.lc
        db = other.degree
        for i in range(dq, -1, -1):
            c = rem[i + db] * inv_lc
            quo[i] = c
            if c != 0:
                for j, b in enumerate(other.coeffs):
                    rem[i + j] = rem[i + j] - c * b
        return Polynomial(quo), Polynomial(rem[:db])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other) -> "Polynomial":
        q, r = divmod(self, other)
        if not r.is_zero():
            raise ArithmeticError("inexact polynomial division")
        return q

    def __truediv__(self, other):
        if isinstance(other, (Polynomial, RationalFunction)):
            return RationalFunction(self) / other
        return self * (1 / _coerce(other))

    def __rtruediv__(self, other):
        return RationalFunction(Polynomial.lift(other)) / self

    # -- calculus / evaluation ------------------------------------------
    def derivative(self, k: int = 1) -> "Polynomial":
        p = self
        for _ in range(k):
            p = Polynomial(c * i for i, c in enumerate(p.coeffs) if i > 0)
        return p

    def __call__(self, v):
        """Horner evaluation at a scalar, Polynomial or RationalFunction."""
        if isinstance(v, (Polynomial, RationalFunction)):
            acc = Polynomial() if isinstance(v, Polynomial) else RationalFunction(Polynomial())
            for c in reversed(self.coeffs):
                acc = acc * v + c
            return acc
        acc: Scalar = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * v + c
        return acc

    def monic(self) -> "Polynomial":
        if self.is_zero():
            return self
        return self * (1 / self.lc)

    def primitive(self) -> tuple[Scalar, "Polynomial"]:
        """Split off content: ``self == c * P``.

        Rational input gives integer P with gcd 1 and positive leading
        coefficient; otherwise P is monic.
        """
        if self.is_zero():
            return Fraction(0), self
        if not self.is_rational():
            return self.lc, self.monic()
        den = reduce(math.lcm, (c.denominator for c in self.coeffs), 1)
        num = reduce(math.gcd, (c.numerator for c in self.coeffs), 0)
        c = Fraction(num, den)
        if self.lc < 0:
            c = -c
        return c, self * (1 / c)

    def shift(self, a) -> "Polynomial":
        """p(x + a)."""
        return self(Polynomial((a, 1)))

    # -- comparison -----------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction, Quad)):
            return self.coeffs == Polynomial.const(other).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(("Polynomial", self.coeffs))

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        return f"Polynomial({self})"

    def __str__(self):
        return format_poly(self)


def format_poly(p: Polynomial, var: str = "x") -> str:
    if p.is_zero():
        return "0"
    parts: list[str] = []
    for k in range(p.degree, -1, -1):
        c = p.coeffs[k]
        if c == 0:
            continue
        if isinstance(c, Quad):
            sign, body = "+", f"({format_scalar(c)})"
            mag_is_one = False
        else:
            sign = "-" if c < 0 else "+"
            body = format_scalar(abs(c))
            mag_is_one = abs(c) == 1
        if k == 0:
            term = body
        else:
            mono = var if k == 1 else f"{var}^{k}"
            term = mono if mag_is_one else f"{body}*{mono}"
        if not parts:
            parts.append(term if sign == "+" else f"-{term}")
        else:
            parts.append(f" {sign} {term}")
    return "".join(parts)


X = Polynomial.x()
ONE = Polynomial.const(1)


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Monic gcd (zero if both are zero)."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def poly_lcm(a: Polynomial, b: Polynomial) -> Polynomial:
    if a.is_zero() or b.is_zero():
        return Polynomial()
    return (a * b // poly_gcd(a, b)).monic()


def poly_xgcd(a: Polynomial, b: Polynomial) -> tuple[Polynomial, Polynomial, Polynomial]:
    """Return (g, s, t) with s*a + t*b == g, g monic."""
    r0, r1 = a, b
    s0, s1 = ONE, Polynomial()
    t0, t1 = Polynomial(), ONE
    while not r1.is_zero():
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    inv = 1 / r0.lc
    return r0 * inv, s0 * inv, t0 * inv


def inverse_mod(a: Polynomial, f: Polynomial) -> Polynomial:
    g, s, _ = poly_xgcd(a % f, f)
    if g.degree != 0:
        raise ZeroDivisionError("not invertible modulo the given factor")
    return s % f


def squarefree_decompose(p: Polynomial) -> list[tuple[Polynomial, int]]:
    """Yun's algorithm: ``p == lc * prod(f**m)`` with pairwise coprime squarefree f.

    Factors come back primitive (integer, positive leading coefficient) for
    rational input and monic otherwise, ordered by multiplicity.
    """
    if p.is_zero():
        raise ValueError("zero input")
    out: list[tuple[Polynomial, int]] = []
    if p.degree == 0:
        return out
    dp = p.derivative()
    a0 = poly_gcd(p, dp)
    b = p // a0
    c = dp // a0
    d = c - b.derivative()
    i = 1
    while b.degree > 0:
        a = poly_gcd(b, d)
        b = b // a
        c = d // a
        d = c - b.derivative()
        if a.degree > 0:
            out.append((a.primitive()[1], i))
        i += 1
    return out


def squarefree_lc(p: Polynomial, parts: Sequence[tuple[Polynomial, int]]) -> Scalar:
    """The scalar lc with p == lc * prod(f**m) for a decomposition of p."""
    prod = ONE
    for f, m in parts:
        prod = prod * f ** m
    return p.lc / prod.lc


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    i = 1
    while i * i <= n:
        if n % i == 0:
            small.append(i)
            if i * i != n:
                large.append(n // i)
        i += 1
    return small + large[::-1]


def rational_roots(p: Polynomial) -> list[Fraction]:
    """Distinct rational roots of a rational polynomial (ascending)."""
    if p.is_zero():
        raise ValueError("zero input")
    if not p.is_rational():
        raise ValueError("rational_roots needs rational coefficients")
    _, q = p.primitive()
    roots: set[Fraction] = set()
    # strip x^k
    k = 0
    while q.coeffs and q.coeffs[k] == 0:
        k += 1
    if k:
        roots.add(Fraction(0))
        q = Polynomial(q.coeffs[k:])
    if q.degree <= 0:
        return sorted(roots)
    a0 = int(q.coeffs[0])
    an = int(q.lc)
    for num in _divisors(a0):
        for den in _divisors(an):
            for cand in (Fraction(num, den), Fraction(-num, den)):
                if cand not in roots and q(cand) == 0:
                    roots.add(cand)
    return sorted(roots)


def quadratic_roots(f: Polynomial) -> tuple[Scalar, Scalar]:
    """Both roots of a quadratic with rational coefficients."""
    if f.degree != 2 or not f.is_rational():
        raise ValueError("need a rational quadratic")
    c, b, a = f.coeffs
    s = sqrt_rational(b * b - 4 * a * c)
    return (-b + s) / (2 * a), (-b - s) / (2 * a)


def _quadratic_factor(f: Polynomial) -> Polynomial | None:
    """An integer quadratic factor of a primitive integer f with no rational roots."""
    cs = [int(c) for c in f.coeffs]
    a0, an = cs[0], cs[-1]
    f1, fm1 = int(f(1)), int(f(-1))
    for p in _divisors(an):
        for r0 in _divisors(a0):
            for r in (r0, -r0):
                for d1 in _divisors(f1):
                    for s1 in (d1, -d1):
                        q = s1 - p - r
                        g_m1 = p - q + r
                        # g(-1) must divide f(-1), which is nonzero (no rational roots)
                        if g_m1 == 0 or fm1 % g_m1:
                            continue
                        g = Polynomial((r, q, p))
                        if (f % g).is_zero():
                            return g
    return None


def irreducible_factors(p: Polynomial) -> list[tuple[Polynomial, int]]:
    """Factor a rational polynomial into irreducible pieces over Q.

    Rational roots are split off first, then integer quadratic factors are
    searched for.  Pieces of degree <= 5 that survive are irreducible; a
    piece of degree >= 6 could still be a product of cubics and is returned
    unsplit.
    """
    out: list[tuple[Polynomial, int]] = []
    for f, m in squarefree_decompose(p):
        rest = f
        for r in rational_roots(f):
            lin = Polynomial((-r, 1)).primitive()[1]
            out.append((lin, m))
            rest = rest // lin
        rest = rest.primitive()[1] if rest.degree > 0 else rest
        while rest.degree >= 4:
            g = _quadratic_factor(rest)
            if g is None:
                break
            out.append((g, m))
            rest = (rest // g).primitive()[1]
        if rest.degree > 0:
            out.append((rest, m))
    out.sort(key=lambda fm: (fm[0].degree, fm[1], str(fm[0])))
    return out


def multiplicity(p: Polynomial, f: Polynomial) -> int:
    """Largest k with f**k dividing p (p nonzero, deg f >= 1)."""
    if p.is_zero():
        raise ValueError("multiplicity in the zero polynomial is infinite")
    k = 0
    while True:
        q, r = divmod(p, f)
        if not r.is_zero():
            return k
        p = q
        k += 1


class RationalFunction:
    """num/den with gcd(num, den) == 1 and monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = Polynomial.lift(num) if not isinstance(num, Polynomial) else num
        den = ONE if den is None else (Polynomial.lift(den) if not isinstance(den, Polynomial) else den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            self.num, self.den = Polynomial(), ONE
            return
        if den.degree > 0:
            g = poly_gcd(num, den)
            if g.degree > 0:
                num, den = num // g, den // g
        lc = den.lc
        self.num = num * (1 / lc) if lc != 1 else num
        self.den = den * (1 / lc) if lc != 1 else den

    @staticmethod
    def lift(v) -> "RationalFunction":
        if isinstance(v, RationalFunction):
            return v
        return RationalFunction(Polynomial.lift(v))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    def __add__(self, other):
        o = RationalFunction.lift(other)
        if self.den == o.den:
            return RationalFunction(self.num + o.num, self.den)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        return self + (-RationalFunction.lift(other))

    def __rsub__(self, other):
        return RationalFunction.lift(other) - self

    def __mul__(self, other):
        o = RationalFunction.lift(other)
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = RationalFunction.lift(other)
        if o.is_zero():
            raise ZeroDivisionError("rational function division by zero")
        return RationalFunction(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return RationalFunction.lift(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return RationalFunction(self.den ** (-k), self.num ** (-k))
        return RationalFunction(self.num ** k, self.den ** k)

    def derivative(self) -> "RationalFunction":
        return RationalFunction(
            self.num.derivative() * self.den - self.num * self.den.derivative(),
            self.den * self.den,
        )

    def __call__(self, v):
        if isinstance(v, (Polynomial, RationalFunction)):
            return RationalFunction.lift(self.num(v)) / RationalFunction.lift(self.den(v))
        d = self.den(v)
        if d == 0:
            raise ZeroDivisionError("pole")
        return self.num(v) / d

    def __eq__(self, other):
        if isinstance(other, (RationalFunction, Polynomial, int, Fraction, Quad)):
            o = RationalFunction.lift(other)
            return self.num == o.num and self.den == o.den
        return NotImplemented

    def __hash__(self):
        return hash(("RationalFunction", self.num, self.den))

    def __repr__(self):
        return f"RationalFunction({self})"

    def __str__(self):
        if self.den == ONE:
            return str(self.num)
        return f"({self.num})/({self.den})"


def common_denominator(fs: Iterable[RationalFunction]) -> Polynomial:
    return reduce(poly_lcm, (f.den for f in fs), ONE)
