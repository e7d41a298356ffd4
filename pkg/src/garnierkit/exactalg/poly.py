"""Sparse polynomials over Q in the fixed 11-variable ring.

Terms are kept in graded lexicographic order over the variable order
``q1 > p1 > q2 > p2 > t > s > k0 > k1 > kinf > th1 > th2``.  The heavy lifting
(multiplication, exact division, gcd) runs on FLINT's ``fmpq_mpoly``; this class
is the boundary the rest of the package sees.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence

from flint import fmpq, fmpq_mpoly, fmpq_mpoly_ctx

VARIABLES = ("q1", "p1", "q2", "p2", "t", "s", "k0", "k1", "kinf", "th1", "th2")
NVARS = len(VARIABLES)

Q1, P1, Q2, P2, T, S, K0, K1, KINF, TH1, TH2 = range(NVARS)
PHASE = (Q1, P1, Q2, P2)
BASE = (T, S)
PARAMS = (K0, K1, KINF, TH1, TH2)

_MAX_EXP = 2**32 - 1
_ZERO_EXP = (0,) * NVARS

_CTX = fmpq_mpoly_ctx.get(VARIABLES, "deglex")


def var_index(name: str) -> int:
    try:
        return VARIABLES.index(name)
    except ValueError:
        raise KeyError(f"unknown variable {name!r}") from None


def to_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, fmpq):
        return Fraction(int(c.p), int(c.q))
    if isinstance(c, int):
        return Fraction(c)
    raise TypeError(f"not an exact rational: {c!r}")


def _to_fmpq(c) -> fmpq:
    c = to_fraction(c)
    return fmpq(c.numerator, c.denominator)


class Poly:
    """Immutable sparse polynomial with exact rational coefficients."""

    __slots__ = ("_p",)

    def __init__(self, terms: Mapping[Sequence[int], object] | None = None):
        if not terms:
            self._p = _CTX.from_dict({})
            return
        clean = {}
        for exps, c in terms.items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != NVARS:
                raise ValueError(f"monomial needs {NVARS} exponents, got {len(exps)}")
            if any(e < 0 or e > _MAX_EXP for e in exps):
                raise ValueError(f"exponent out of range in {exps}")
            c = to_fraction(c)
            if c:
                clean[exps] = clean.get(exps, Fraction(0)) + c
        self._p = _CTX.from_dict({e: _to_fmpq(c) for e, c in clean.items() if c})

    @classmethod
    def _wrap(cls, p: fmpq_mpoly) -> Poly:
        obj = cls.__new__(cls)
        obj._p = p
        return obj

    @classmethod
    def constant(cls, c) -> Poly:
        return cls._wrap(_CTX.constant(_to_fmpq(c)))

    @classmethod
    def gen(cls, i: int) -> Poly:
        return cls._wrap(_CTX.gen(i))

    @property
    def terms(self) -> dict[tuple[int, ...], Fraction]:
        """Monomial -> coefficient, in descending graded lexicographic order."""
        return {tuple(int(e) for e in m): to_fraction(c) for m, c in self._p.terms()}

    def __len__(self) -> int:
        return len(self._p)

    def is_zero(self) -> bool:
        return self._p.is_zero()

    def is_one(self) -> bool:
        return self._p.is_one()

    def is_constant(self) -> bool:
        return self._p.is_constant()

    def degrees(self) -> tuple[int, ...]:
        return tuple(int(d) for d in self._p.degrees())

    def total_degree(self) -> int:
        return int(self._p.total_degree()) if not self._p.is_zero() else -1

    def leading_coefficient(self) -> Fraction:
        if self._p.is_zero():
            return Fraction(0)
        return to_fraction(self._p.leading_coefficient())

    def variables(self) -> frozenset[int]:
        return frozenset(i for i, d in enumerate(self._p.degrees()) if d > 0)

    # arithmetic -----------------------------------------------------------

    def _coerce(self, other) -> fmpq_mpoly | None:
        if isinstance(other, Poly):
            return other._p
        if isinstance(other, (int, Fraction)):
            return _CTX.constant(_to_fmpq(other))
        return None

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else Poly._wrap(self._p + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else Poly._wrap(self._p - o)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else Poly._wrap(o - self._p)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else Poly._wrap(self._p * o)

    __rmul__ = __mul__

    def __neg__(self) -> Poly:
        return Poly._wrap(-self._p)

    def __pow__(self, k: int) -> Poly:
        if k < 0:
            raise ValueError("negative power of a polynomial")
        return Poly._wrap(self._p**k)

    def exact_div(self, other: Poly) -> Poly:
        """Quotient when ``other`` divides ``self``; raises ArithmeticError otherwise."""
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        try:
            return Poly._wrap(self._p / other._p)
        except Exception as exc:
            raise ArithmeticError(f"inexact polynomial division: {exc}") from None

    def scale(self, c) -> Poly:
        return Poly._wrap(self._p * _to_fmpq(c))

    def gcd(self, other: Poly) -> Poly:
        return Poly._wrap(self._p.gcd(other._p))

    def derivative(self, i: int) -> Poly:
        return Poly._wrap(self._p.derivative(i))

    def compose(self, images: Sequence[Poly]) -> Poly:
        """Substitute polynomial ``images[i]`` for variable ``i``."""
        return Poly._wrap(self._p.compose(*(g._p for g in images)))

    def factor(self) -> tuple[Fraction, list[tuple[Poly, int]]]:
        c, facs = self._p.factor()
        return to_fraction(c), [(Poly._wrap(f), int(m)) for f, m in facs]

    def evaluate(self, point: Sequence) -> Fraction:
        if len(point) != NVARS:
            raise ValueError(f"point needs {NVARS} coordinates")
        return to_fraction(self._p(*(_to_fmpq(x) for x in point)))

    # comparison -----------------------------------------------------------

    def __eq__(self, other) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._p == o

    def __hash__(self) -> int:
        return hash(tuple((tuple(m), str(c)) for m, c in self._p.terms()))

    def __repr__(self) -> str:
        return f"Poly({self._p})"


ZERO = Poly()
ONE = Poly.constant(1)
