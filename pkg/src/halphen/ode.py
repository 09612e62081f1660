"""Linear differential operators with polynomial coefficients.

An operator ``sum c_k(x) d^k/dx^k`` is stored with the coefficients it was
built from; :meth:`DiffOperator.normalized` gives the canonical representative
(common polynomial factor and scalar content removed) and equality is
equality of those representatives.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence, Union

from .exactalg import (
    ONE,
    X,
    Polynomial,
    Quad,
    RationalFunction,
    Scalar,
    as_scalar,
    format_poly,
    format_scalar,
    inverse_mod,
    irreducible_factors,
    poly_gcd,
    poly_lcm,
    quadratic_roots,
    rational_roots,
    squarefree_decompose,
)
from .exactalg.scalars import extension_of, sqrt_rational


class FuchsianError(ValueError):
    """An operator has an irregular singular point."""


class _Infinity:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "INF"

    def __str__(self):
        return "infinity"

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()
Point = Union[Fraction, Quad, _Infinity]


# ---------------------------------------------------------------------------
# operators


def _poly(c) -> Polynomial:
    if isinstance(c, Polynomial):
        return c
    if isinstance(c, RationalFunction):
        if not c.is_polynomial():
            raise ValueError("operator coefficients must be polynomials")
        return c.num * (1 / c.den.lc)
    return Polynomial.const(c)


class DiffOperator:
    __slots__ = ("coeffs", "_norm")

    def __init__(self, coeffs: Iterable):
        cs = [_poly(c) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        if len(cs) < 2:
            raise ValueError("operator must have order >= 1")
        self.coeffs: tuple[Polynomial, ...] = tuple(cs)
        self._norm = None

    @classmethod
    def from_rational(cls, coeffs: Sequence) -> "DiffOperator":
        """Clear denominators of rational-function coefficients."""
        rfs = [RationalFunction.lift(c) for c in coeffs]
        den = reduce(poly_lcm, (f.den for f in rfs), ONE)
        return cls([(f * den).num for f in rfs])

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> Polynomial:
        return self.coeffs[-1]

    def field(self) -> int | None:
        return extension_of(c for p in self.coeffs for c in p.coeffs)

    def normalized(self) -> "DiffOperator":
        """Divide out the common polynomial factor and the scalar content.

        Rational operators end with integer coefficients of gcd 1 and positive
        leading coefficient; operators over a quadratic field end monic.
        """
        if self._norm is not None:
            return self._norm
        g = reduce(poly_gcd, self.coeffs)
        cs = [c // g for c in self.coeffs] if g.degree > 0 else list(self.coeffs)
        if all(c.is_rational() for c in cs):
            den = reduce(math.lcm, (v.denominator for c in cs for v in c.coeffs), 1)
            num = reduce(math.gcd, (v.numerator for c in cs for v in c.coeffs), 0)
            s = Fraction(den, num)
            lead = cs[-1].lc
            if lead < 0:
                s = -s
        else:
            s = 1 / cs[-1].lc
        op = DiffOperator([c * s for c in cs])
        op._norm = op
        self._norm = op
        return op

    def monic_coeffs(self) -> list[RationalFunction]:
        """q_k = c_k / c_order, k = 0..order (last entry is 1)."""
        lead = self.leading
        return [RationalFunction(c, lead) for c in self.coeffs]

    def apply(self, f):
        """Apply to a Polynomial or RationalFunction."""
        out = RationalFunction.lift(Polynomial())
        d = RationalFunction.lift(f)
        for c in self.coeffs:
            out = out + d * c
            d = d.derivative()
        return out

    def scaled(self, s) -> "DiffOperator":
        return DiffOperator([c * s for c in self.coeffs])

    def __eq__(self, other):
        if not isinstance(other, DiffOperator):
            return NotImplemented
        return self.normalized().coeffs == other.normalized().coeffs

    def __hash__(self):
        return hash(self.normalized().coeffs)

    def ratio_to(self, other: "DiffOperator") -> Scalar | None:
        """Scalar s with self == s * other coefficientwise, or None."""
        if self.order != other.order:
            return None
        s = None
        for a, b in zip(self.coeffs, other.coeffs):
            if a.is_zero() != b.is_zero():
                return None
            if a.is_zero():
                continue
            t = a.lc / b.lc
            if s is None:
                s = t
            if t != s or a != b * s:
                return None
        return s

    def __repr__(self):
        return f"DiffOperator({self})"

    def __str__(self):
        parts = []
        for k in range(self.order, -1, -1):
            c = self.coeffs[k]
            if c.is_zero():
                continue
            y = "y" + ("'" * k if k <= 3 else f"^({k})")
            parts.append(f"({format_poly(c)})*{y}")
        return " + ".join(parts)


# ---------------------------------------------------------------------------
# Lamé and Heun forms


def _check_cubic(p0: Polynomial) -> Polynomial:
    if p0.degree != 3:
        raise ValueError("p0 must be a cubic")
    p0 = p0.monic()
    if squarefree_decompose(p0) != [(p0.primitive()[1], 1)]:
        raise ValueError("p0 must be squarefree")
    return p0


def sum_of_roots(p0: Polynomial) -> Scalar:
    return -p0[2] / p0[3]


@dataclass(frozen=True)
class LameEquation:
    """p y'' + p'/2 y' - (nu x - H) y = 0 with p = 4 p0."""

    p0: Polynomial
    nu: Scalar
    H: Scalar

    def __post_init__(self):
        object.__setattr__(self, "p0", _check_cubic(self.p0))
        object.__setattr__(self, "nu", as_scalar(self.nu))
        object.__setattr__(self, "H", as_scalar(self.H))

    @property
    def p(self) -> Polynomial:
        return self.p0 * 4

    @property
    def sum_e(self) -> Scalar:
        return sum_of_roots(self.p0)

    def q(self) -> Polynomial:
        return Polynomial((self.H, -self.nu))

    def as_operator(self) -> DiffOperator:
        p = self.p
        return DiffOperator([self.q(), p.derivative() * Fraction(1, 2), p])

    @classmethod
    def from_operator(cls, op: DiffOperator) -> "LameEquation":
        if op.order != 2 or op.coeffs[2].degree != 3:
            raise ValueError("not a Lamé operator")
        c0, c1, c2 = op.coeffs
        s = 4 / c2.lc
        p = c2 * s
        if c1 * s != p.derivative() * Fraction(1, 2) or c0.degree > 1:
            raise ValueError("not a Lamé operator")
        q = c0 * s
        return cls(p * Fraction(1, 4), -q[1], q[0])

    def n_values(self) -> tuple[Scalar, Scalar]:
        """The two roots n of n(n+1) = nu."""
        s = sqrt_rational(1 + 4 * self.nu) if not isinstance(self.nu, Quad) else None
        if s is None:
            raise ValueError("nu outside the rationals")
        return (-1 + s) / 2, (-1 - s) / 2


@dataclass(frozen=True)
class HeunEquation:
    """p0 y'' + lam p0' y' + (ab x + Ht) y = 0."""

    p0: Polynomial
    ab: Scalar
    Ht: Scalar
    lam: Scalar = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "p0", _check_cubic(self.p0))
        for k in ("ab", "Ht", "lam"):
            object.__setattr__(self, k, as_scalar(getattr(self, k)))

    @property
    def sum_e(self) -> Scalar:
        return sum_of_roots(self.p0)

    def as_operator(self) -> DiffOperator:
        return DiffOperator([Polynomial((self.Ht, self.ab)), self.p0.derivative() * self.lam, self.p0])

    @classmethod
    def from_operator(cls, op: DiffOperator) -> "HeunEquation":
        if op.order != 2 or op.coeffs[2].degree != 3:
            raise ValueError("not a Heun operator of this form")
        c0, c1, c2 = op.coeffs
        s = 1 / c2.lc
        p0 = c2 * s
        d = p0.derivative()
        lam = (c1 * s).lc / d.lc if not c1.is_zero() else Fraction(0)
        if c1 * s != d * lam or c0.degree > 1:
            raise ValueError("not a Heun operator of this form")
        q = c0 * s
        return cls(p0, q[1], q[0], lam)


# ---------------------------------------------------------------------------
# Möbius maps and changes of variable


@dataclass(frozen=True)
class MoebiusMap:
    """x -> (a x + b) / (c x + d)."""

    a: Scalar
    b: Scalar
    c: Scalar
    d: Scalar

    def __post_init__(self):
        for k in "abcd":
            object.__setattr__(self, k, as_scalar(getattr(self, k)))
        if self.a * self.d - self.b * self.c == 0:
            raise ValueError("singular Möbius map")

    @classmethod
    def identity(cls) -> "MoebiusMap":
        return cls(1, 0, 0, 1)

    @classmethod
    def affine(cls, a, b) -> "MoebiusMap":
        return cls(a, b, 0, 1)

    @classmethod
    def to_zero_one_inf(cls, p0: Point, p1: Point, pinf: Point) -> "MoebiusMap":
        """The map sending p0, p1, pinf to 0, 1, infinity."""
        if len({repr(p0), repr(p1), repr(pinf)}) != 3:
            raise ValueError("points must be distinct")
        if pinf is INF:
            return cls(1, -p0, 0, p1 - p0)
        if p0 is INF:
            return cls(0, p1 - pinf, 1, -pinf)
        if p1 is INF:
            return cls(1, -p0, 1, -pinf)
        # (x - p0)(p1 - pinf) / ((x - pinf)(p1 - p0))
        return cls(p1 - pinf, -p0 * (p1 - pinf), p1 - p0, -pinf * (p1 - p0))

    def __call__(self, v: Point) -> Point:
        if v is INF:
            return INF if self.c == 0 else self.a / self.c
        den = self.c * v + self.d
        if den == 0:
            return INF
        return (self.a * v + self.b) / den

    def compose(self, other: "MoebiusMap") -> "MoebiusMap":
        """self o other."""
        return MoebiusMap(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "MoebiusMap":
        return MoebiusMap(self.d, -self.b, -self.c, self.a)

    def as_rational_function(self) -> RationalFunction:
        return RationalFunction(Polynomial((self.b, self.a)), Polynomial((self.d, self.c)))

    def normalized(self) -> tuple[Scalar, ...]:
        """Coefficients scaled so that d = 1, or c = 1 when d = 0."""
        s = self.d if self.d != 0 else self.c
        return tuple(w / s for w in (self.a, self.b, self.c, self.d))

    def __eq__(self, other):
        if not isinstance(other, MoebiusMap):
            return NotImplemented
        return self.normalized() == other.normalized()

    def __hash__(self):
        return hash(self.normalized())

    def __str__(self):
        a, b, c, d = self.normalized()
        num = format_poly(Polynomial((b, a)))
        if c == 0:
            return f"x -> {num}"
        return f"x -> ({num})/({format_poly(Polynomial((d, c)))})"


def substitute(op: DiffOperator, phi: RationalFunction) -> DiffOperator:
    """Operator in u satisfied by w(u) = y(phi(u)) for every solution y of op."""
    phi = RationalFunction.lift(phi)
    dphi = phi.derivative()
    if dphi.is_zero():
        raise ValueError("constant substitution")
    inv = 1 / dphi
    # rows[k][j]: coefficient of w^(j) in y^(k)(phi(u))
    rows = [[RationalFunction.lift(1)]]
    for _ in range(op.order):
        prev = rows[-1]
        nxt = [RationalFunction.lift(0)] * (len(prev) + 1)
        for j, a in enumerate(prev):
            nxt[j] = nxt[j] + a.derivative() * inv
            nxt[j + 1] = nxt[j + 1] + a * inv
        rows.append(nxt)
    new = [RationalFunction.lift(0)] * (op.order + 1)
    for k, c in enumerate(op.coeffs):
        if c.is_zero():
            continue
        ck = c(phi)
        for j, a in enumerate(rows[k]):
            new[j] = new[j] + ck * a
    return DiffOperator.from_rational(new)


def moebius_transform(op: DiffOperator, m: MoebiusMap) -> DiffOperator:
    """Operator whose solutions are y o m^{-1}; singular points move by m."""
    return substitute(op, m.inverse().as_rational_function())


def gauge(op: DiffOperator, r) -> DiffOperator:
    """Operator annihilating g*f for f in ker(op), where g'/g = r."""
    s = -RationalFunction.lift(r)  # logarithmic derivative of 1/g
    rows = [[RationalFunction.lift(1)]]
    for _ in range(op.order):
        prev = rows[-1]
        nxt = [RationalFunction.lift(0)] * (len(prev) + 1)
        for j, b in enumerate(prev):
            nxt[j] = nxt[j] + s * b + b.derivative()
            nxt[j + 1] = nxt[j + 1] + b
        rows.append(nxt)
    new = [RationalFunction.lift(0)] * (op.order + 1)
    for k, c in enumerate(op.coeffs):
        for j, b in enumerate(rows[k]):
            new[j] = new[j] + b * c
    return DiffOperator.from_rational(new)


def projective_invariant(op: DiffOperator) -> RationalFunction:
    """q2 - q1^2/4 - q1'/2 for the monic form y'' + q1 y' + q2 y."""
    if op.order != 2:
        raise ValueError("order 2 expected")
    q0, q1, _ = op.monic_coeffs()
    return q0 - q1 * q1 * Fraction(1, 4) - q1.derivative() * Fraction(1, 2)


# ---------------------------------------------------------------------------
# singular points and Riemann schemes


@dataclass(frozen=True)
class SchemeEntry:
    """Exponents at a singular point.

    ``point`` is a scalar, ``INF``, or (for conjugate points with irrational
    coordinates) the irreducible rational factor whose roots they are;
    ``count`` is the number of points the entry stands for.
    """

    point: object
    exponents: tuple
    count: int = 1

    def label(self) -> str:
        if self.point is INF:
            return "infinity"
        if isinstance(self.point, Polynomial):
            return f"roots of {format_poly(self.point)}"
        return format_scalar(self.point)


@dataclass(frozen=True)
class RiemannScheme:
    entries: tuple

    def points(self) -> list:
        return [e.point for e in self.entries]

    def at(self, point) -> tuple:
        for e in self.entries:
            if e.point == point or (e.point is INF and point is INF):
                return e.exponents
        raise KeyError(point)

    def num_points(self) -> int:
        return sum(e.count for e in self.entries)

    def exponent_sum(self) -> Scalar:
        total: Scalar = Fraction(0)
        for e in self.entries:
            for x in e.exponents:
                total = total + e.count * x
        return total

    def fuchs_defect(self, order: int) -> Scalar:
        """Exponent sum minus (s - 2) n(n-1)/2; zero for a Fuchsian operator."""
        return self.exponent_sum() - Fraction((self.num_points() - 2) * order * (order - 1), 2)

    def __str__(self):
        return "; ".join(f"{e.label()}: {{{', '.join(format_scalar(x) for x in e.exponents)}}}" for e in self.entries)


def _falling(rho_poly_var: Polynomial, j: int) -> Polynomial:
    out = ONE
    for i in range(j):
        out = out * (rho_poly_var - i)
    return out


def _roots_of_indicial(ind: Polynomial) -> tuple:
    """All roots, with multiplicity, of a rational polynomial of degree <= 3."""
    if not ind.is_rational():
        raise ValueError("indicial polynomial with irrational coefficients")
    roots: list = []
    rest = ind
    for r in rational_roots(ind):
        lin = Polynomial((-r, 1))
        while (rest % lin).is_zero():
            rest = rest // lin
            roots.append(r)
    if rest.degree == 2:
        roots.extend(quadratic_roots(rest))
    elif rest.degree > 2:
        raise ValueError("indicial polynomial has an irreducible cubic factor")
    return tuple(_sort_key_sorted(roots))


def _sort_key_sorted(vals):
    def key(v):
        if isinstance(v, Quad):
            return (float(v.a), float(v.b))
        return (float(v), 0.0)

    return sorted(vals, key=key)


def _residue(p: Polynomial, f: Polynomial) -> Polynomial:
    return p % f


def indicial_at_factor(op: DiffOperator, f: Polynomial) -> Polynomial:
    """Indicial polynomial (in rho) at the roots of an irreducible factor f.

    Computed in K[x]/f.  Its coefficients must reduce to constants; otherwise
    conjugate points would carry different exponents and an error is raised.
    """
    n = op.order
    lead = op.leading
    m = 0
    u = lead
    while (u % f).is_zero():
        u = u // f
        m += 1
    df = f.derivative()
    inv_u = inverse_mod(u, f)
    inv_df = inverse_mod(df, f)
    rho = X
    ind = Polynomial()
    for j, c in enumerate(op.coeffs):
        k = n - j  # allowed pole order of c_j / c_n
        if c.is_zero():
            continue
        if m <= k:
            num = c * f ** (k - m)
        else:
            num, r = divmod(c, f ** (m - k))
            if not r.is_zero():
                raise FuchsianError(f"irregular singular point at the roots of {format_poly(f)}")
        val = _residue(num * inv_u * (inv_df ** k if k else ONE), f)
        if val.degree > 0:
            raise ValueError(f"exponents differ between the roots of {format_poly(f)}")
        ind = ind + _falling(rho, j) * val[0]
    return ind


def _reversed(op: DiffOperator) -> DiffOperator:
    return substitute(op, RationalFunction(ONE, X))


def _point_factors(p: Polynomial) -> list[Polynomial]:
    """Irreducible factors of p: over Q for rational p, linear over Q(sqrt d) otherwise."""
    if p.is_rational():
        return [f for f, _ in irreducible_factors(p)]
    d = p.field()
    conjugate = Polynomial(c.conjugate() if isinstance(c, Quad) else c for c in p.coeffs)
    norm = p * conjugate
    out: list[Polynomial] = []
    seen = set()
    for g, _ in irreducible_factors(Polynomial(norm.coeffs)):
        if g.degree == 1:
            cands = [-g[0] / g[1]]
        elif g.degree == 2:
            cands = list(quadratic_roots(g))
        else:
            raise ValueError("cannot locate singular points of degree > 2 over the coefficient field")
        for r in cands:
            if isinstance(r, Quad) and r.d != d:
                continue
            if p(r) == 0 and r not in seen:
                seen.add(r)
                out.append(Polynomial((-r, 1)))
    return out


def singular_points(op: DiffOperator) -> list:
    """Finite singular factors (irreducible over the coefficient field), plus INF if singular."""
    nop = op.normalized()
    pts: list = list(_point_factors(nop.leading)) if nop.leading.degree > 0 else []
    rev = _reversed(nop).normalized()
    if rev.leading(0) == 0:
        pts.append(INF)
    return pts


def riemann_scheme(op: DiffOperator) -> RiemannScheme:
    nop = op.normalized()
    entries = []
    if nop.leading.degree > 0:
        for f in _point_factors(nop.leading):
            ind = indicial_at_factor(nop, f)
            exps = _roots_of_indicial(ind)
            if len(exps) != nop.order:
                raise FuchsianError(f"irregular singular point at the roots of {format_poly(f)}")
            if f.degree == 1:
                entries.append(SchemeEntry(-f[0] / f[1], exps, 1))
            else:
                entries.append(SchemeEntry(f, exps, f.degree))
    rev = _reversed(nop).normalized()
    if rev.leading(0) == 0:
        ind = indicial_at_factor(rev, X)
        exps = _roots_of_indicial(ind)
        if len(exps) != nop.order:
            raise FuchsianError("irregular singular point at infinity")
        entries.append(SchemeEntry(INF, exps, 1))
    return RiemannScheme(tuple(entries))


def is_fuchsian(op: DiffOperator) -> bool:
    try:
        riemann_scheme(op)
    except FuchsianError:
        return False
    return True


def fuchs_relation_holds(op: DiffOperator) -> bool:
    return riemann_scheme(op).fuchs_defect(op.order) == 0


def indicial_exponents_at(op: DiffOperator, point: Point) -> tuple:
    """Exponents at any point (ordinary points give 0..order-1)."""
    nop = op.normalized()
    if point is INF:
        return _roots_of_indicial(indicial_at_factor(_reversed(nop).normalized(), X))
    return _roots_of_indicial(indicial_at_factor(nop, Polynomial((-point, 1))))


# ---------------------------------------------------------------------------
# Heun normal forms


def _scheme_points_explicit(op: DiffOperator) -> list[tuple[Point, tuple]]:
    """Singular points as explicit scalars (quadratic-field coordinates allowed)."""
    out = []
    for e in riemann_scheme(op).entries:
        if isinstance(e.point, Polynomial):
            f = e.point
            if f.degree != 2:
                raise ValueError("singular point of degree > 2")
            for r in quadratic_roots(f):
                out.append((r, e.exponents))
        else:
            out.append((e.point, e.exponents))
    return out


def _min_exponent(exps: tuple) -> Scalar:
    rats = [e for e in exps if not isinstance(e, Quad)]
    if len(rats) != len(exps):
        raise ValueError("irrational local exponents")
    return min(rats)


def projective_singular_points(op: DiffOperator) -> list[Point]:
    """Points where the projective invariant is singular (true singularities up to gauge)."""
    inv = projective_invariant(op)
    out: list[Point] = []
    for pt, _ in _scheme_points_explicit(op):
        if pt is INF:
            if inv.den.degree - inv.num.degree < 4 and not inv.is_zero():
                out.append(INF)
        elif inv.den(pt) == 0:
            out.append(pt)
    return out


def heun_form(op: DiffOperator, m: MoebiusMap) -> DiffOperator:
    """Move points by m, then shift the smallest exponent at every finite point to 0.

    Apparent points whose exponents become {0, 1} disappear in the
    normalization.
    """
    new = moebius_transform(op, m)
    r = RationalFunction.lift(0)
    for pt, exps in _scheme_points_explicit(new):
        if pt is INF:
            continue
        e = _min_exponent(exps)
        if e != 0:
            r = r + RationalFunction(Polynomial.const(-e), Polynomial((-pt, 1)))
    if not r.is_zero():
        new = gauge(new, r)
    return new.normalized()


def cross_ratios(points: Sequence[Point]) -> set:
    """The values t for which some Möbius map sends the four points to {0, 1, t, infinity}."""
    out = set()
    for i0, i1, i2 in itertools.permutations(range(4), 3):
        m = MoebiusMap.to_zero_one_inf(points[i0], points[i1], points[i2])
        out.add(m(points[6 - i0 - i1 - i2]))
    return out


def point_maps(src: Sequence[Point], dst: Sequence[Point]) -> list[MoebiusMap]:
    """All Möbius maps sending the four points src bijectively onto dst."""
    if len(src) != 4 or len(dst) != 4:
        raise ValueError("four points expected")
    md = MoebiusMap.to_zero_one_inf(dst[0], dst[1], dst[2])
    t = md(dst[3])
    md_inv = md.inverse()
    out = []
    for i0, i1, i2 in itertools.permutations(range(4), 3):
        ms = MoebiusMap.to_zero_one_inf(src[i0], src[i1], src[i2])
        if ms(src[6 - i0 - i1 - i2]) == t:
            out.append(md_inv.compose(ms))
    return out


def normalize_heun(op: DiffOperator, with_maps: bool = False):
    """All normal forms with projective singular points {0, 1, t, infinity}.

    Returns a set of (t, operator) pairs (or (t, operator, map) triples when
    ``with_maps``), one per ordered choice of the three points sent to
    0, 1 and infinity.
    """
    if op.order != 2:
        raise ValueError("order 2 expected")
    pts = projective_singular_points(op)
    if len(pts) != 4:
        raise ValueError(f"expected 4 singular points, found {len(pts)}")
    results = set()
    for i0, i1, i2 in itertools.permutations(range(4), 3):
        m = MoebiusMap.to_zero_one_inf(pts[i0], pts[i1], pts[i2])
        t = m(pts[6 - i0 - i1 - i2])
        form = heun_form(op, m)
        results.add((t, form, m) if with_maps else (t, form))
    return results
