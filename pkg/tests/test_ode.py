from fractions import Fraction

import pytest
from hypothesis import given, assume
from hypothesis import strategies as st

from halphen.exactalg import Polynomial
from halphen.ode import (
    INF,
    DiffOperator,
    FuchsianError,
    HeunEquation,
    LameEquation,
    MoebiusMap,
    fuchs_relation_holds,
    is_fuchsian,
    moebius_transform,
    normalize_heun,
    riemann_scheme,
    singular_points,
)
from halphen.parse import parse_poly as P

from strategies import fractions, nonzero_fractions

F = Fraction
KRAMMER = LameEquation(P("x*(x-1)*(x-81)"), F(-2, 9), -2)


def test_lame_as_operator():
    op = KRAMMER.as_operator()
    p = P("4*x*(x-1)*(x-81)")
    assert op.coeffs == (P("2/9*x - 2"), p.derivative() * F(1, 2), p)


def test_trivial_lame_kills_constants():
    op = LameEquation(P("x^3-x"), 0, 0).as_operator()
    assert op.apply(Polynomial.const(1)).is_zero()


def test_heun_row_2():
    op = HeunEquation(P("x*(x-1)*(x+1)"), 1, 0).as_operator()
    assert op == DiffOperator([P("x"), P("3*x^2-1"), P("x^3-x")])


def test_equality_up_to_scalar():
    op = KRAMMER.as_operator()
    assert op == op.scaled(F(-3, 7))
    assert op.normalized().coeffs[-1].lc > 0


def test_lame_scheme():
    s = riemann_scheme(KRAMMER.as_operator())
    for e in (0, 1, 81):
        assert s.at(F(e)) == (0, F(1, 2))
    assert s.at(INF) == (F(1, 6), F(1, 3))
    assert s.fuchs_defect(2) == 0


def test_scheme_of_y_second():
    s = riemann_scheme(DiffOperator([0, 0, 1]))
    assert s.points() == [INF] and s.at(INF) == (-1, 0)


def test_scheme_at_irrational_points():
    # conjugate roots of x^2+3x+6 are represented by the factor
    op = HeunEquation(P("x*(x^2+3*x+6)"), F(1, 2), F(1, 3)).as_operator()
    s = riemann_scheme(op)
    assert s.at(P("x^2+3*x+6")) == (0, 0)
    assert s.num_points() == 4 and s.fuchs_defect(2) == 0


def test_irregular_point_is_reported():
    with pytest.raises(FuchsianError, match="roots of x$"):
        riemann_scheme(DiffOperator([1, 0, P("x^3")]))
    assert not is_fuchsian(DiffOperator([1, 0, P("x^3")]))


def test_moebius_examples():
    op = KRAMMER.as_operator()
    assert moebius_transform(op, MoebiusMap.identity()) == op
    moved = moebius_transform(op, MoebiusMap.affine(F(1, 81), 0))
    assert set(riemann_scheme(moved).points()) == {0, F(1, 81), 1, INF}
    assert set(singular_points(moved)) == {P("x"), P("81*x-1"), P("x-1"), INF}
    flip = moebius_transform(DiffOperator([0, 0, 1]), MoebiusMap(0, 1, 1, 0))
    s = riemann_scheme(flip)
    assert s.points() == [0] and s.at(F(0)) == (-1, 0)


def test_normalize_heun_orbit():
    ts = {t for t, _ in normalize_heun(KRAMMER.as_operator())}
    assert ts == {F(81), F(1, 81), F(-80), F(-1, 80), F(80, 81), F(81, 80)}


def test_normalize_heun_identity_case():
    op = HeunEquation(P("x*(x-1)*(x+1)"), 1, 0).as_operator()
    assert (F(-1), op) in normalize_heun(op)


def test_normalize_heun_needs_four_points():
    with pytest.raises(ValueError):
        normalize_heun(DiffOperator([0, P("1-2*x"), P("x-x^2")]))


# -- properties ----------------------------------------------------------


@st.composite
def lame_data(draw):
    roots = draw(st.lists(fractions, min_size=3, max_size=3, unique=True))
    return LameEquation(Polynomial.from_roots(roots), draw(fractions), draw(fractions))


@st.composite
def moebius_maps(draw):
    a, b, c, d = (draw(st.integers(-5, 5)) for _ in range(4))
    assume(a * d - b * c != 0)
    return MoebiusMap(a, b, c, d)


@given(lame_data(), moebius_maps())
def test_scheme_moves_with_moebius(eq, m):
    op = eq.as_operator()
    before = riemann_scheme(op)
    after = riemann_scheme(moebius_transform(op, m))
    # solutions y o m^-1: point p of op goes to m(p)
    want = {}
    for e in before.entries:
        want[m(e.point)] = e.exponents
    got = {e.point: e.exponents for e in after.entries}
    assert got == want
    assert fuchs_relation_holds(moebius_transform(op, m))


@given(lame_data())
def test_lame_operator_round_trip(eq):
    assert LameEquation.from_operator(eq.as_operator().scaled(F(-5, 3))) == eq


@given(lame_data())
def test_fuchs_on_lame(eq):
    s = riemann_scheme(eq.as_operator())
    assert s.exponent_sum() == 2 and s.fuchs_defect(2) == 0


@given(lame_data(), nonzero_fractions)
def test_scaled_operator_same_scheme(eq, c):
    op = eq.as_operator()
    assert riemann_scheme(op) == riemann_scheme(op.scaled(c))
