"""Exact arithmetic kernel: rationals, sparse polynomials, rational functions."""

from .expression import (
    DegenerateSubstitutionError,
    DivisionByZeroError,
    Expression,
    PoleError,
    as_expr,
    differentiate,
    eval_at,
    is_polynomial_in,
    rat_div,
    ring_op,
    substitute,
    variables,
)
from .identity import Verdict, equals, is_zero, random_point
from .parse import ParseError, parse_expr, parse_rational, to_text
from .poly import (
    BASE,
    K0,
    K1,
    KINF,
    NVARS,
    P1,
    P2,
    PARAMS,
    PHASE,
    Q1,
    Q2,
    S,
    T,
    TH1,
    TH2,
    VARIABLES,
    Poly,
    var_index,
)

__all__ = [
    "BASE", "K0", "K1", "KINF", "NVARS", "P1", "P2", "PARAMS", "PHASE", "Q1", "Q2", "S", "T", "TH1", "TH2",
    "VARIABLES", "DegenerateSubstitutionError", "DivisionByZeroError", "Expression", "ParseError", "PoleError",
    "Poly", "Verdict", "as_expr", "differentiate", "equals", "eval_at", "is_polynomial_in", "is_zero",
    "parse_expr", "parse_rational", "random_point", "rat_div", "ring_op", "substitute", "to_text",
    "var_index", "variables",
]
