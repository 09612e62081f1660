from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from halphen.exactalg import Polynomial
from halphen.golden import table_rows
from halphen.ode import DiffOperator, HeunEquation, LameEquation, fuchs_relation_holds, riemann_scheme
from halphen.parse import parse_poly as P
from halphen.transforms import (
    euler_r0,
    euler_r1,
    euler_third_order,
    euler_transform,
    halphen_a,
    halphen_bc,
    halphen_c_closed,
    heun_to_lame,
    inverse_halphen_c,
    lame_to_heun,
    reduce_order,
    reproduce_tables,
    sym_square_2nd,
)

from strategies import fractions

F = Fraction
X = Polynomial.x()
KRAMMER = LameEquation(P("x*(x-1)*(x-81)"), F(-2, 9), -2)


@st.composite
def lame_data(draw, nu=None):
    roots = draw(st.lists(fractions, min_size=3, max_size=3, unique=True))
    nu = draw(fractions) if nu is None else nu
    return LameEquation(Polynomial.from_roots(roots), nu, draw(fractions))


@st.composite
def lame_with_n(draw):
    """Lamé data together with a rational n, nu = n(n+1)."""
    n = draw(fractions)
    return draw(lame_data(nu=n * (n + 1))), n


# -- symmetric square ------------------------------------------------------------


def _series_solution(op: DiffOperator, a0, a1, order: int) -> Polynomial:
    """Truncated power series solution at 0 (an ordinary point)."""
    c0, c1, c2 = (c.coeffs for c in op.coeffs)
    get = lambda c, j: c[j] if j < len(c) else 0
    a = [F(a0), F(a1)]
    for k in range(order - 1):
        # coefficient of x^k in c2 y'' + c1 y' + c0 y, solved for a[k+2]
        s = F(0)
        for j in range(k + 1):
            if j > 0:
                s += get(c2, j) * (k - j + 2) * (k - j + 1) * a[k - j + 2]
            s += get(c1, j) * (k - j + 1) * a[k - j + 1]
            s += get(c0, j) * a[k - j]
        a.append(-s / (get(c2, 0) * (k + 2) * (k + 1)))
    return Polynomial(a)


def _low_order_vanishes(r, upto: int) -> bool:
    assert r.den.degree == 0
    return all(c == 0 for c in r.num.coeffs[:upto])


def test_sym_square_trivial():
    assert sym_square_2nd(DiffOperator([0, 0, 1])) == DiffOperator([0, 0, 0, 1])


def test_sym_square_lame_display():
    for eq in (KRAMMER, LameEquation(P("x^3-x"), F(3, 5), F(-7, 2))):
        p = eq.p
        want = DiffOperator([
            Polynomial.const(-2 * eq.nu),
            p.derivative().derivative() * F(1, 2) - (X * eq.nu - eq.H) * 4,
            p.derivative() * F(3, 2),
            p,
        ])
        assert sym_square_2nd(eq.as_operator()) == want


def test_sym_square_krammer_integer_form():
    got = sym_square_2nd(KRAMMER.as_operator()).normalized()
    assert all(c.denominator == 1 for poly in got.coeffs for c in poly.coeffs)


def test_sym_square_series_oracle():
    eq = LameEquation(P("(x-1)*(x-2)*(x+3)"), F(5, 3), F(1, 7))
    op = eq.as_operator()
    N = 14
    u = _series_solution(op, 1, 0, N)
    v = _series_solution(op, 0, 1, N)
    sq = sym_square_2nd(op)
    for f in (u * u, u * v, v * v):
        assert _low_order_vanishes(sq.apply(f), N - 3)


def test_sym_square_legendre():
    # (1-x^2) y'' - 2x y' + l(l+1) y has the Legendre polynomial P_3 as solution
    op = DiffOperator([12, P("-2*x"), P("1-x^2")])
    p3 = P("5/2*x^3 - 3/2*x")
    assert op.apply(p3).is_zero()
    assert sym_square_2nd(op).apply(p3 * p3).is_zero()


def test_sym_square_order_check():
    with pytest.raises(ValueError):
        sym_square_2nd(DiffOperator([0, 0, 0, 1]))


# -- Euler transform ----------------------------------------------------------------


def _display_r1(eq, mu):
    e = eq.sum_e
    return (6 * X - 2 * e) * 4 * (mu * (mu - 1) / 2 + F(3, 2) * mu + F(1, 2)) - (X * eq.nu - eq.H) * 4


def _display_r0(nu, mu):
    return 4 * mu ** 3 + 6 * mu ** 2 + 2 * mu - 4 * mu * nu - 2 * nu


def test_r0_examples():
    assert euler_r0(F(7, 3), F(-1, 2)) == 0
    assert euler_r0(2, 3) == 140 == 2 * 7 * (3 - 1) * (3 + 1 + 1)


def test_r1_krammer():
    assert euler_r1(KRAMMER, F(-1, 2)) == P("35/9*x - 90")


@given(lame_data(), fractions)
def test_closed_forms_match_display(eq, mu):
    assert euler_r1(eq, mu) == _display_r1(eq, mu)
    assert euler_r0(eq.nu, mu) == _display_r0(eq.nu, mu) == 2 * (2 * mu + 1) * (mu * mu + mu - eq.nu)


@given(fractions)
def test_r0_roots(n):
    nu = n * (n + 1)
    assert euler_r0(nu, F(-1, 2)) == euler_r0(nu, n) == euler_r0(nu, -n - 1) == 0


@given(lame_data(), fractions)
def test_weyl_oracle(eq, mu):
    """The general Euler transform of the symmetric square agrees with the closed form."""
    assert euler_transform(sym_square_2nd(eq.as_operator()), mu, reduce=False) == euler_third_order(eq, mu)


# -- Halphen specializations ----------------------------------------------------------


def test_halphen_a_krammer():
    op = halphen_a(KRAMMER)
    p = KRAMMER.p
    assert op.coeffs == (P("35/9*x - 90"), p.derivative(), p)


def test_halphen_a_vanishing_term():
    eq = LameEquation(P("x^3-2*x^2+x/3-5"), F(3, 4), F(2, 4))
    assert halphen_a(eq).coeffs[0].is_zero()


def test_halphen_a_row_2():
    eq = LameEquation(P("x*(x-1)*(x+1)"), F(-1, 4), 0)
    assert halphen_a(eq) == HeunEquation(P("x*(x-1)*(x+1)"), 1, 0).as_operator()


@given(lame_data())
def test_specialization_a_is_reduced_third_order(eq):
    assert reduce_order(euler_third_order(eq, F(-1, 2))) == halphen_a(eq)
    assert halphen_a(eq).coeffs == reduce_order(euler_third_order(eq, F(-1, 2))).coeffs


@given(lame_with_n())
def test_specializations_bc(data):
    eq, n = data
    assert halphen_bc(eq, n, "c") == halphen_c_closed(eq, n)
    assert halphen_bc(eq, n, "b") == reduce_order(euler_third_order(eq, n))
    # case b at n is case c at -n-1
    assert halphen_bc(eq, n, "b") == halphen_bc(eq, -n - 1, "c")


def test_case_b_uses_closed_form():
    # the closed form puts 4(n+1)^2 on the root sum, not (n+1)^2
    eq = LameEquation(P("x*(x-1)*(x-3)"), 2, 0)
    op = halphen_bc(eq, 1, "b")
    assert op.coeffs[0] == P("4*2*5*x") - 4 * 4 * eq.sum_e


def test_halphen_bc_requires_n():
    with pytest.raises(ValueError):
        halphen_bc(KRAMMER, 1, "c")


def test_halphen_c_scheme():
    for n in (F(-1, 6), F(1, 3), F(2), F(-5, 2), F(3, 7)):
        eq = LameEquation(P("x^3 - 7*x + 6"), n * (n + 1), F(1, 5))
        s = riemann_scheme(halphen_bc(eq, n, "c"))
        for e in (1, 2, -3):
            assert s.at(F(e)) == tuple(sorted((F(0), n + F(1, 2))))
        assert set(s.at(s.points()[-1])) == {-2 * n, F(1, 2) - n}
        assert s.fuchs_defect(2) == 0


def test_example_halphen_c():
    eq = LameEquation(P("x*(x-1)*(x-32/27)"), F(-5, 36), F(-13, 108))
    got = halphen_bc(eq, F(-1, 6), "c").scaled(F(1, 4))
    assert got.coeffs == (P("2/9*x - 44/243"), P("x*(x-1)*(x-32/27)").derivative() * F(2, 3), eq.p0)


@given(lame_data(), fractions)
def test_fuchs_on_outputs(eq, mu):
    assert fuchs_relation_holds(halphen_a(eq))
    assert fuchs_relation_holds(euler_third_order(eq, mu))
    assert fuchs_relation_holds(sym_square_2nd(eq.as_operator()))


# -- table maps --------------------------------------------------------------


def test_heun_to_lame_rows():
    row9 = heun_to_lame(HeunEquation(P("x*(x-1)*(x-81)"), F(35, 36), F(-45, 2)))
    assert (row9.nu, row9.H) == (F(-2, 9), -2)
    row16 = heun_to_lame(HeunEquation(P("x*(x-1)*(x-2/27)"), F(8, 9), F(-8, 27)))
    assert (row16.nu, row16.H) == (F(-5, 36), F(-1, 36))
    eq = heun_to_lame(HeunEquation(P("x^3-3*x^2+x"), F(3, 4), F(-3, 4)))
    assert (eq.nu, eq.H) == (0, 0)


def test_heun_to_lame_rejects_lambda():
    with pytest.raises(ValueError, match="inverse_halphen_c"):
        heun_to_lame(HeunEquation(P("x^3-x"), 1, 0, F(2, 3)))


def test_inverse_halphen_c_example():
    h = HeunEquation(P("x*(x-1)*(x-32/27)"), F(2, 9), F(-44, 243), F(2, 3))
    eq, n = inverse_halphen_c(h)
    assert n == F(-1, 6) and eq.nu == F(-5, 36) and eq.H == F(-13, 108)


def test_inverse_halphen_c_degenerate():
    with pytest.raises(ValueError):
        inverse_halphen_c(HeunEquation(P("x^3-x"), 0, 0, F(1, 2)))


def test_inverse_halphen_c_lambda_one():
    # lam = 1 means n = -1/2; both inverses give nu = -1/4
    h = HeunEquation(P("x*(x-1)*(x+1)"), 1, 0)
    eq, n = inverse_halphen_c(h)
    assert n == F(-1, 2) and eq.nu == heun_to_lame(h).nu == F(-1, 4)


@given(lame_data())
def test_round_trip_a(eq):
    assert heun_to_lame(lame_to_heun(eq)) == eq


@given(lame_with_n())
def test_round_trip_c(data):
    eq, n = data
    if n == 0:
        return
    h = HeunEquation.from_operator(halphen_bc(eq, n, "c"))
    back, m = inverse_halphen_c(h)
    assert back == eq and m == n


def test_tables_all_rows():
    rep = reproduce_tables()
    assert rep.ok and rep.summary["matched"] == rep.summary["total"] == 13


def test_tables_row_9():
    row = next(r for r in table_rows() if r.row == 9)
    got = heun_to_lame(row.heun)
    assert (got.nu, got.H) == (F(-2, 9), -2)


def test_tables_perturbed():
    rep = reproduce_tables(perturb={9: 1})
    assert not rep.ok and rep.passed == 12
    bad = rep.failures()[0]
    assert bad.name == "row 9" and bad.detail["difference_H"] == "1"


def test_tables_parallel_matches_serial():
    assert reproduce_tables(workers=4).passed == 13


@given(lame_with_n())
def test_weyl_oracle_at_special_mu(data):
    """Unreduced, the general transform is the third-order closed form even where r0 vanishes."""
    eq, n = data
    sq = sym_square_2nd(eq.as_operator())
    for mu in (F(-1, 2), n, -n - 1):
        assert euler_transform(sq, mu, reduce=False) == euler_third_order(eq, mu)


def test_reduced_transform_drops_order():
    eq = LameEquation(P("x^3-x"), 0, F(1, 3))
    sq = sym_square_2nd(eq.as_operator())
    assert euler_transform(sq, 0, reduce=False).order == 3
    assert euler_transform(sq, 0).order == 2
