"""Rational functions in the 11-variable ring, kept in lowest terms."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

from .poly import NVARS, ONE, VARIABLES, ZERO, Poly, to_fraction, var_index


class DivisionByZeroError(ZeroDivisionError):
    pass


class DegenerateSubstitutionError(ZeroDivisionError):
    """A substitution collapsed some denominator to the zero expression."""


class PoleError(ZeroDivisionError):
    def __init__(self, message: str, component: str | None = None):
        super().__init__(message)
        self.component = component


Scalar = Union[int, Fraction]


class Expression:
    """Immutable quotient ``num/den`` of polynomials.

    Always stored fully reduced (gcd removed) with a monic denominator, so two
    expressions are mathematically equal iff their numerators and denominators
    are equal.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Poly | Scalar = ZERO, den: Poly | Scalar = ONE):
        num = num if isinstance(num, Poly) else Poly.constant(num)
        den = den if isinstance(den, Poly) else Poly.constant(den)
        if den.is_zero():
            raise DivisionByZeroError("zero denominator")
        if num.is_zero():
            num, den = ZERO, ONE
        else:
            g = num.gcd(den)
            if not g.is_one():
                num, den = num.exact_div(g), den.exact_div(g)
            lc = den.leading_coefficient()
            if lc != 1:
                num, den = num.scale(1 / lc), den.scale(1 / lc)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("Expression is immutable")

    @classmethod
    def _reduced(cls, num: Poly, den: Poly) -> Expression:
        # caller guarantees gcd(num, den) = 1 and monic den
        obj = cls.__new__(cls)
        object.__setattr__(obj, "num", num)
        object.__setattr__(obj, "den", den)
        return obj

    @classmethod
    def var(cls, name: str | int) -> Expression:
        i = name if isinstance(name, int) else var_index(name)
        return cls._reduced(Poly.gen(i), ONE)

    @classmethod
    def const(cls, c: Scalar) -> Expression:
        return cls._reduced(Poly.constant(c), ONE)

    # predicates -----------------------------------------------------------

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.is_one()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_one()

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("expression is not constant")
        return self.num.leading_coefficient()

    def variables(self) -> frozenset[int]:
        return self.num.variables() | self.den.variables()

    # arithmetic -----------------------------------------------------------

    @staticmethod
    def _lift(x) -> Expression | None:
        if isinstance(x, Expression):
            return x
        if isinstance(x, (int, Fraction)):
            return Expression.const(x)
        if isinstance(x, Poly):
            return Expression._reduced(x, ONE)
        return None

    def __add__(self, other):
        b = self._lift(other)
        if b is None:
            return NotImplemented
        if self.den == b.den:
            return Expression(self.num + b.num, self.den)
        g = self.den.gcd(b.den)
        ad, bd = self.den.exact_div(g), b.den.exact_div(g)
        return Expression(self.num * bd + b.num * ad, ad * b.den)

    __radd__ = __add__

    def __neg__(self) -> Expression:
        return Expression._reduced(-self.num, self.den)

    def __sub__(self, other):
        b = self._lift(other)
        return NotImplemented if b is None else self + (-b)

    def __rsub__(self, other):
        b = self._lift(other)
        return NotImplemented if b is None else b + (-self)

    def __mul__(self, other):
        b = self._lift(other)
        if b is None:
            return NotImplemented
        g1 = self.num.gcd(b.den)
        g2 = b.num.gcd(self.den)
        return Expression(
            self.num.exact_div(g1) * b.num.exact_div(g2),
            self.den.exact_div(g2) * b.den.exact_div(g1),
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._lift(other)
        if b is None:
            return NotImplemented
        return self * b.reciprocal()

    def __rtruediv__(self, other):
        b = self._lift(other)
        return NotImplemented if b is None else b * self.reciprocal()

    def reciprocal(self) -> Expression:
        if self.is_zero():
            raise DivisionByZeroError("division by the zero expression")
        return Expression(self.den, self.num)

    def __pow__(self, k: int) -> Expression:
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.reciprocal() ** (-k)
        return Expression._reduced(self.num**k, self.den**k)

    def __eq__(self, other):
        b = self._lift(other)
        if b is None:
            return NotImplemented
        return self.num == b.num and self.den == b.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __str__(self) -> str:
        from .parse import to_text

        return to_text(self)

    def __repr__(self) -> str:
        return f"Expression({self})"

    # calculus and composition ---------------------------------------------

    def diff(self, v: int) -> Expression:
        return differentiate(self, v)

    def subs(self, mapping: Mapping[int | str, object]) -> Expression:
        return substitute(self, mapping)


ExprLike = Union[Expression, Poly, int, Fraction]


def as_expr(x: ExprLike) -> Expression:
    e = Expression._lift(x)
    if e is None:
        raise TypeError(f"cannot convert {x!r} to Expression")
    return e


def variables() -> tuple[Expression, ...]:
    return tuple(Expression.var(i) for i in range(NVARS))


def ring_op(kind: str, a: ExprLike, b: ExprLike | None = None) -> Expression:
    a = as_expr(a)
    if kind == "neg":
        return -a
    b = as_expr(b)
    if kind == "add":
        return a + b
    if kind == "sub":
        return a - b
    if kind == "mul":
        return a * b
    raise ValueError(f"unknown ring operation {kind!r}")


def rat_div(a: ExprLike, b: ExprLike) -> Expression:
    return as_expr(a) / as_expr(b)


def differentiate(f: Expression, v: int) -> Expression:
    if not 0 <= v < NVARS:
        raise IndexError(f"variable index {v} out of range")
    dn = f.num.derivative(v)
    if f.den.is_constant():
        return Expression._reduced(dn, f.den) if not dn.is_zero() else Expression()
    dd = f.den.derivative(v)
    if dd.is_zero():
        return Expression(dn, f.den)
    # (n/d)' = (n'd - nd')/d^2; the d in d^2 only partially cancels
    return Expression(dn * f.den - f.num * dd, f.den * f.den)


def _normalize_mapping(mapping: Mapping[int | str, object]) -> dict[int, Expression]:
    out = {}
    for k, v in mapping.items():
        i = k if isinstance(k, int) else var_index(k)
        if not 0 <= i < NVARS:
            raise IndexError(f"variable index {i} out of range")
        out[i] = as_expr(v)
    return out


def _subs_poly(p: Poly, images: dict[int, Expression]) -> tuple[Poly, dict[int, int]]:
    """Return (P~, D) with p(images) = P~ / prod(den_i ** D[i])."""
    degs = p.degrees()
    active = [i for i in images if degs[i] > 0]
    if not active:
        return p, {}
    if all(images[i].den.is_one() for i in active):
        gens = [images[i].num if i in images else Poly.gen(i) for i in range(NVARS)]
        return p.compose(gens), {}

    # group terms by their exponents in the substituted variables
    groups: dict[tuple[int, ...], dict[tuple[int, ...], Fraction]] = {}
    for mono, c in p.terms.items():
        key = tuple(mono[i] for i in active)
        rest = list(mono)
        for i in active:
            rest[i] = 0
        groups.setdefault(key, {})[tuple(rest)] = c

    cache: dict[tuple[int, int], Poly] = {}

    def piece(i: int, e: int) -> Poly:
        k = (i, e)
        if k not in cache:
            img = images[i]
            cache[k] = img.num**e * img.den ** (degs[i] - e)
        return cache[k]

    total = ZERO
    for key, rest in groups.items():
        acc = Poly(rest)
        for i, e in zip(active, key):
            acc = acc * piece(i, e)
        total = total + acc
    return total, {i: degs[i] for i in active if not images[i].den.is_one()}


def substitute(f: Expression, mapping: Mapping[int | str, object]) -> Expression:
    """Compose ``f`` with the assignment ``mapping``; unmapped variables stay fixed."""
    images = _normalize_mapping(mapping)
    if not images:
        return f
    n, dn = _subs_poly(f.num, images)
    d, dd = _subs_poly(f.den, images)
    if d.is_zero():
        raise DegenerateSubstitutionError(f"denominator {f.den} vanishes identically under substitution")
    num, den = n, d
    for i in set(dn) | set(dd):
        k = dd.get(i, 0) - dn.get(i, 0)
        if k > 0:
            num = num * images[i].den ** k
        elif k < 0:
            den = den * images[i].den ** (-k)
    return Expression(num, den)


def _point_tuple(point) -> tuple[Fraction, ...]:
    if isinstance(point, Mapping):
        vals = [None] * NVARS
        for k, v in point.items():
            i = k if isinstance(k, int) else var_index(k)
            vals[i] = to_fraction(v)
        missing = [VARIABLES[i] for i, v in enumerate(vals) if v is None]
        if missing:
            raise ValueError(f"unassigned variables: {', '.join(missing)}")
        return tuple(vals)
    vals = tuple(to_fraction(v) for v in point)
    if len(vals) != NVARS:
        raise ValueError(f"point needs {NVARS} coordinates")
    return vals


def eval_at(f: Expression, point) -> Fraction:
    x = _point_tuple(point)
    d = f.den.evaluate(x)
    if d == 0:
        raise PoleError(f"denominator {f.den} vanishes at the point", component=str(Expression(f.den)))
    return f.num.evaluate(x) / d


def is_polynomial_in(f: Expression, vars: Iterable[int | str]) -> bool:
    idx = {v if isinstance(v, int) else var_index(v) for v in vars}
    # f is always stored in lowest terms, so the denominator test is sound
    return not (f.den.variables() & idx)


def substitution_from_sequence(images: Sequence[ExprLike], indices: Sequence[int]) -> dict[int, Expression]:
    return {i: as_expr(e) for i, e in zip(indices, images)}
