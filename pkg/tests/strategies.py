"""Hypothesis strategies for small random rational functions."""

from fractions import Fraction

from hypothesis import strategies as st

from garnierkit.exactalg import Q1, P1, Q2, T, S, Expression

SMALL_VARS = (Q1, P1, Q2, T, S)

coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=4)
monomials = st.lists(st.tuples(st.sampled_from(SMALL_VARS), st.integers(1, 3)), max_size=3)


@st.composite
def polys(draw, max_terms=4):
    total = Expression.const(0)
    for _ in range(draw(st.integers(0, max_terms))):
        term = Expression.const(draw(coeffs))
        for v, e in draw(monomials):
            term = term * Expression.var(v) ** e
        total = total + term
    return total


@st.composite
def nonzero_polys(draw):
    p = draw(polys())
    return p if not p.is_zero() else p + draw(coeffs.filter(lambda c: c != 0))


@st.composite
def rationals(draw):
    return draw(polys()) / draw(nonzero_polys())


def rational_points(n=len(SMALL_VARS)):
    return st.lists(st.fractions(min_value=-50, max_value=50, max_denominator=30), min_size=n, max_size=n)


@st.composite
def substitutions(draw):
    """Images for two of the variables; other variables stay fixed."""
    chosen = draw(st.lists(st.sampled_from(SMALL_VARS), min_size=1, max_size=2, unique=True))
    return {v: draw(rationals()) for v in chosen}


__all__ = ["polys", "nonzero_polys", "rationals", "rational_points", "substitutions", "SMALL_VARS", "Fraction"]
