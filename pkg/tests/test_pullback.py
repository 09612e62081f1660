from fractions import Fraction

import mpmath
import pytest

from halphen.exactalg import irreducible_factors, squarefree_decompose
from halphen.golden import belyi_rows
from halphen.ode import (
    HeunEquation,
    MoebiusMap,
    is_fuchsian,
    moebius_transform,
    riemann_scheme,
)
from halphen.parse import parse_poly as P, parse_value
from halphen.pullback import (
    BelyiMap,
    HGParams,
    is_belyi,
    pullback_operator,
    ramification_data,
    verify_pullback_row,
)

F = Fraction
ROWS = belyi_rows()


def _row(rid):
    r = ROWS[rid]
    j = BelyiMap(P(r["j1"]), P(r["j2"]))
    hg = HGParams(*(parse_value(v) for v in r["hg"]))
    h = r["heun"]
    heun = HeunEquation(P(h["p0"]), parse_value(h["ab"]), parse_value(h["Ht"]), parse_value(h["lam"]))
    return j, hg, heun


def test_ramification_examples():
    j, _, _ = _row("i")
    assert ramification_data(j).as_lists() == [[2, 2, 1], [5], [2, 2, 1]]
    j, _, _ = _row("ii")
    assert ramification_data(j).as_lists() == [[5], [2, 2, 1], [3, 1, 1]]
    assert ramification_data(BelyiMap(P("x"), P("1"))).as_lists() == [[1], [1], [1]]


@pytest.mark.parametrize("rid", list(ROWS))
def test_fibers_sum_to_degree(rid):
    j, _, _ = _row(rid)
    r = ramification_data(j)
    assert all(sum(f) == j.degree for f in r.as_lists())
    assert is_belyi(j)


def test_is_belyi_examples():
    assert is_belyi(BelyiMap(P("x^2"), P("1")))
    assert not is_belyi(BelyiMap(P("x^3-3*x"), P("1")))


def test_belyi_map_validation():
    with pytest.raises(ValueError):
        BelyiMap(P("x*(x-1)"), P("x"))
    with pytest.raises(ValueError):
        BelyiMap(P("3"), P("1"))
    with pytest.raises(ValueError):
        HGParams(1, 1, -2)


def test_identity_pullback():
    hg = HGParams(F(1, 3), F(1, 5), F(2, 7))
    assert pullback_operator(hg, BelyiMap(P("x"), P("1"))) == hg.operator()


def test_non_belyi_warns():
    with pytest.warns(UserWarning):
        pullback_operator(HGParams(F(1, 3), F(1, 5), F(2, 7)), BelyiMap(P("x^3-3*x"), P("1")))


def test_row_i_operator():
    j, hg, heun = _row("i")
    op = pullback_operator(hg, j, hg.b)
    assert moebius_transform(op, MoebiusMap.affine(F(1, 5), 0)) == heun.as_operator()


@pytest.mark.parametrize("rid", ["i", "ii", "iii", "iv"])
def test_rows_verify(rid):
    rep = verify_pullback_row(rid)
    assert rep.ok, rep.failures()


def test_row_iii_ramification():
    rep = verify_pullback_row("iii")
    ram = next(c for c in rep.checks if c.name == "ramification")
    assert ram.detail["got"] == [[3, 2, 1], [2, 2, 2], [5, 1]]


def test_row_v_accessory_mismatch():
    rep = verify_pullback_row("v")
    op = next(c for c in rep.checks if c.name == "operator")
    assert not op.ok
    assert op.detail["Ht"] == "20/27" and op.detail["difference"] == "25/216"


def test_perturbed_row_fails():
    rep = verify_pullback_row("i", perturb_a=F(1, 7))
    assert not rep.ok and not next(c for c in rep.checks if c.name == "operator").ok


def test_unknown_row():
    with pytest.raises(KeyError):
        verify_pullback_row("vi")


def test_example_3_8():
    rep = verify_pullback_row("ex3.8")
    assert rep.ok, rep.failures()
    cr = next(c for c in rep.checks if c.name == "cross ratio")
    assert "32/27" in cr.detail["t_values"]


@pytest.mark.parametrize("rid", ["i", "ii", "iii", "iv", "v"])
def test_pullback_exponents(rid):
    """Exponents over each of 0, 1, infinity are the multiplicity times the
    hypergeometric ones, shifted by the gauge at the poles."""
    j, hg, _ = _row(rid)
    a, b, c = hg.a, hg.b, hg.c
    for e in (a, b):
        op = pullback_operator(hg, j, e)
        assert is_fuchsian(op)
        s = riemann_scheme(op)
        assert s.fuchs_defect(2) == 0
        fibers = (
            (j.j1, (0, 1 - c)),
            (j.j1 - j.j2, (0, c - a - b)),
            (j.j2, (a - e, b - e)),
        )
        checked = 0
        for poly, local in fibers:
            for root, m in _rational_zeros(poly):
                want = sorted(m * x for x in local)
                if root in s.points():
                    assert list(s.at(root)) == want
                else:
                    assert want == [0, 1]
                checked += 1
        assert checked > 0


def _rational_zeros(p):
    out = []
    for f, m in squarefree_decompose(p):
        for g, _ in irreducible_factors(f):
            if g.degree == 1:
                out.append((-g[0] / g[1], m))
    return out


# -- numeric oracle for row v ----------------------------------------------------------

mpmath.mp.dps = 40


def _numeric_residual(op, fn, x0):
    vals = [mpmath.diff(fn, x0, k) for k in range(3)]
    coeffs = [mpmath.mpf(0)] * 3
    for k, c in enumerate(op.coeffs):
        coeffs[k] = sum(mpmath.mpf(a.numerator) / a.denominator * x0 ** i for i, a in enumerate(c.coeffs))
    scale = max(abs(c * v) for c, v in zip(coeffs, vals))
    return abs(sum(c * v for c, v in zip(coeffs, vals))) / scale


def test_row_v_numeric_oracle():
    j, hg, heun = _row("v")
    a, b, c = (mpmath.mpf(v.numerator) / v.denominator for v in (hg.a, hg.b, hg.c))

    def ev(p, x):
        return sum(mpmath.mpf(q.numerator) / q.denominator * x ** i for i, q in enumerate(p.coeffs))

    def sol(x):
        # printed coordinate X corresponds to map coordinate X + 1
        t = x + 1
        return ev(j.j2, t) ** (-b) * mpmath.hyp2f1(a, b, c, ev(j.j1, t) / ev(j.j2, t))

    x0 = mpmath.mpf("0.04")
    corrected = HeunEquation(heun.p0, heun.ab, F(20, 27), heun.lam).as_operator()
    assert _numeric_residual(corrected, sol, x0) < mpmath.mpf(10) ** -25
    assert _numeric_residual(heun.as_operator(), sol, x0) > mpmath.mpf(10) ** -3
