"""Hypothesis strategies shared by the test modules."""
from fractions import Fraction

from hypothesis import strategies as st

from halphen.exactalg import Polynomial, Quad

small_int = st.integers(-12, 12)
fractions = st.builds(Fraction, st.integers(-40, 40), st.integers(1, 12))
nonzero_fractions = fractions.filter(lambda q: q != 0)


def quads(d: int = -15):
    return st.builds(lambda a, b: Quad.make(a, b, d), fractions, fractions)


def polys(max_degree: int = 4, coeffs=fractions):
    return st.lists(coeffs, min_size=1, max_size=max_degree + 1).map(Polynomial)


@st.composite
def squarefree_cubics(draw):
    """Monic cubics with three distinct rational roots."""
    roots = draw(st.lists(fractions, min_size=3, max_size=3, unique=True))
    return Polynomial.from_roots(roots)
