"""Symmetric square, Euler transform and the Halphen specializations."""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from math import comb

from .exactalg import ONE, X, Polynomial, RationalFunction, Scalar, as_scalar, format_poly, format_scalar
from .ode import DiffOperator, HeunEquation, LameEquation
from .report import Report

HALF = Fraction(1, 2)


def sym_square_2nd(op: DiffOperator) -> DiffOperator:
    """Operator annihilating all products of two solutions of an order-2 operator."""
    if op.order != 2:
        raise ValueError(f"sym_square_2nd needs order 2, got {op.order}")
    q2, q1, _ = op.monic_coeffs()
    c2 = q1 * 3
    c1 = q1.derivative() + q2 * 4 + q1 * q1 * 2
    c0 = (q2.derivative() + q1 * q2 * 2) * 2
    return DiffOperator.from_rational([c0, c1, c2, RationalFunction.lift(1)])


def euler_r1(eq: LameEquation, mu) -> Polynomial:
    mu = as_scalar(mu)
    k = (mu + 1) * (mu + 1)
    return Polynomial((-4 * k * eq.sum_e + 4 * eq.H, 12 * k - 4 * eq.nu))


def euler_r0(nu, mu) -> Scalar:
    mu, nu = as_scalar(mu), as_scalar(nu)
    return 2 * (2 * mu + 1) * (mu * mu + mu - nu)


def euler_third_order(eq: LameEquation, mu) -> DiffOperator:
    """Euler transform with exponent mu of the symmetric square of a Lamé equation."""
    mu = as_scalar(mu)
    p = eq.p
    return DiffOperator([
        Polynomial.const(euler_r0(eq.nu, mu)),
        euler_r1(eq, mu),
        p.derivative() * (Fraction(3, 2) + mu),
        p,
    ])


def reduce_order(op: DiffOperator) -> DiffOperator:
    """The operator satisfied by y' when op has no zeroth-order term."""
    if not op.coeffs[0].is_zero():
        raise ValueError("zeroth-order coefficient is not zero")
    return DiffOperator(op.coeffs[1:])


def halphen_a(eq: LameEquation) -> DiffOperator:
    p = eq.p
    return DiffOperator([
        Polynomial((4 * eq.H - eq.sum_e, -(4 * eq.nu - 3))),
        p.derivative(),
        p,
    ])


def halphen_bc(eq: LameEquation, n, case: str) -> DiffOperator:
    n = as_scalar(n)
    if n * (n + 1) != eq.nu:
        raise ValueError(f"n(n+1) = {format_scalar(n * (n + 1))} differs from nu = {format_scalar(eq.nu)}")
    if case == "b":
        mu = n
    elif case == "c":
        mu = -n - 1
    else:
        raise ValueError(f"unknown case {case!r}")
    return reduce_order(euler_third_order(eq, mu))


def halphen_c_closed(eq: LameEquation, n) -> DiffOperator:
    """Case c written out: p y'' + (1/2 - n) p' y' + (4(H - n^2 e) + 4n(2n-1) x) y."""
    n = as_scalar(n)
    p = eq.p
    return DiffOperator([
        Polynomial((4 * (eq.H - n * n * eq.sum_e), 4 * n * (2 * n - 1))),
        p.derivative() * (HALF - n),
        p,
    ])


def heun_to_lame(h: HeunEquation) -> LameEquation:
    if h.lam != 1:
        raise ValueError("first-order factor is not 1; use inverse_halphen_c")
    return LameEquation(h.p0, Fraction(3, 4) - h.ab, h.Ht + h.sum_e / 4)


def lame_to_heun(eq: LameEquation) -> HeunEquation:
    return HeunEquation.from_operator(halphen_a(eq).scaled(Fraction(1, 4)))


def inverse_halphen_c(h: HeunEquation) -> tuple[LameEquation, Scalar]:
    """Lamé data L and n with halphen_bc(L, n, 'c') equal to h up to scalar."""
    if h.lam == HALF:
        raise ValueError("first-order factor 1/2 gives n = 0; inverse is ambiguous")
    n = HALF - h.lam
    if h.ab != n * (2 * n - 1):
        raise ValueError(
            f"linear coefficient {format_scalar(h.ab)} is not n(2n-1) = {format_scalar(n * (2 * n - 1))} for n = {format_scalar(n)}"
        )
    return LameEquation(h.p0, n * (n + 1), h.Ht + n * n * h.sum_e), n


# ---------------------------------------------------------------------------
# Euler transform of a general operator, used as an independent check


def _weyl_terms(op: DiffOperator, shift: int) -> dict[tuple[int, int], Scalar]:
    """Coefficients of x^i d^k in d^shift * op."""
    out: dict[tuple[int, int], Scalar] = {}
    for k, c in enumerate(op.coeffs):
        for i, a in enumerate(c.coeffs):
            if a == 0:
                continue
            # d^s x^i = sum_l C(s,l) [i]_l x^(i-l) d^(s-l)
            for l in range(0, min(shift, i) + 1):
                f = comb(shift, l)
                for t in range(l):
                    f *= i - t
                key = (i - l, shift - l + k)
                out[key] = out.get(key, Fraction(0)) + a * f
    return {k: v for k, v in out.items() if v != 0}


def _falling(p: Polynomial, j: int) -> Polynomial:
    out = ONE
    for t in range(j):
        out = out * (p - t)
    return out


def _stirling2(n: int) -> list[int]:
    row = [1]
    for m in range(1, n + 1):
        new = [0] * (m + 1)
        for k in range(1, m + 1):
            new[k] = k * (row[k] if k < len(row) else 0) + row[k - 1]
        row = new
    return row


def _left_divide_by_d(coeffs: list[Polynomial]) -> list[Polynomial] | None:
    """N with d*N == M (coefficient lists lowest order first), or None."""
    m = len(coeffs) - 1
    n: list[Polynomial] = [Polynomial()] * m
    # d*N = sum n_k' d^k + n_k d^(k+1); match from the top
    for k in range(m - 1, -1, -1):
        nxt = n[k + 1].derivative() if k + 1 < m else Polynomial()
        n[k] = coeffs[k + 1] - nxt
    if n[0].derivative() != coeffs[0]:
        return None
    return n


def euler_transform(op: DiffOperator, mu, reduce: bool = True) -> DiffOperator:
    """Operator for the Euler integral of solutions against (x - t)^(-1-mu).

    Writes d^s*op as sum d^a P_a(theta) with theta = x d, replaces theta by
    theta + mu and strips left factors of d.  With ``reduce`` every left
    factor of d goes, which lowers the order at special mu; without it at
    most s factors are removed, so the order is kept.
    """
    mu = as_scalar(mu)
    shift = max(0, max(c.degree - k for k, c in enumerate(op.coeffs) if not c.is_zero()))
    theta = X
    parts: dict[int, Polynomial] = {}
    for (i, k), a in _weyl_terms(op, shift).items():
        # x^i d^k = d^(k-i) [theta - (k-i)]_i
        aa = k - i
        if aa < 0:
            raise AssertionError("shift too small")
        parts[aa] = parts.get(aa, Polynomial()) + _falling(theta - aa, i) * a
    # back to x-form: d^a theta^j, theta^j = sum_l S(j,l) x^l d^l
    size = max(aa + p.degree for aa, p in parts.items()) + 1
    coeffs = [Polynomial()] * (size + 1)
    for aa, P in parts.items():
        Q = P(theta + mu)
        for j, qj in enumerate(Q.coeffs):
            if qj == 0:
                continue
            for l, s in enumerate(_stirling2(j)):
                if s == 0:
                    continue
                # d^a x^l d^l = sum_r C(a,r) [l]_r x^(l-r) d^(a-r+l)
                for r in range(0, min(aa, l) + 1):
                    f = comb(aa, r)
                    for t in range(r):
                        f *= l - t
                    coeffs[aa - r + l] = coeffs[aa - r + l] + Polynomial.monomial(l - r, qj * s * f)
    while len(coeffs) > 1 and coeffs[-1].is_zero():
        coeffs.pop()
    stripped = 0
    while reduce or stripped < shift:
        q = _left_divide_by_d(coeffs)
        if q is None or len(q) < 2:
            break
        coeffs = q
        stripped += 1
    return DiffOperator(coeffs)


# ---------------------------------------------------------------------------
# table reproduction


def _row_check(row, perturb: dict | None):
    heun = row.heun
    if perturb and row.row in perturb:
        heun = HeunEquation(heun.p0, heun.ab, heun.Ht + perturb[row.row], heun.lam)
    got = heun_to_lame(heun)
    want = row.lame
    ok_lame = got == want
    ok_inv = halphen_a(want) == heun.as_operator()
    detail = {
        "nu": format_scalar(got.nu),
        "H": format_scalar(got.H),
        "p0": format_poly(got.p0),
    }
    if not ok_lame:
        detail["expected_nu"] = format_scalar(want.nu)
        detail["expected_H"] = format_scalar(want.H)
        detail["difference_H"] = format_scalar(got.H - want.H)
        detail["difference_nu"] = format_scalar(got.nu - want.nu)
    return row.row, ok_lame and ok_inv, ok_lame, ok_inv, detail


def reproduce_tables(rows=None, perturb: dict | None = None, workers: int = 1) -> Report:
    """Map every Heun row to its Lamé row and back.

    ``perturb`` maps a row number to an amount added to that row's H-tilde,
    for fault injection.
    """
    from .golden import table_rows

    rows = table_rows() if rows is None else rows
    rep = Report("tables")
    if workers > 1:
        with ThreadPoolExecutor(workers) as ex:
            results = list(ex.map(lambda r: _row_check(r, perturb), rows))
    else:
        results = [_row_check(r, perturb) for r in rows]
    for num, ok, ok_lame, ok_inv, detail in results:
        rep.add(f"row {num}", ok, heun_to_lame=ok_lame, halphen_a=ok_inv, **detail)
    rep.summary["matched"] = rep.passed
    rep.summary["total"] = len(rep.checks)
    return rep
