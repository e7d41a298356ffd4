"""The two-variable Garnier system as a pair of commuting Hamiltonian flows."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .exactalg import (
    K0, K1, KINF, P1, P2, PARAMS, Q1, Q2, S, T, TH1, TH2,
    Expression, as_expr, equals, substitute,
)
from .exactalg.expression import ExprLike

# (q1, p1, q2, p2) and the Hamiltonian-derivative each phase coordinate follows
_CONJUGATE = {Q1: (P1, 1), P1: (Q1, -1), Q2: (P2, 1), P2: (Q2, -1)}


@dataclass(frozen=True)
class ParameterSet:
    """The five constants; the sixth one, kappa, is always derived."""

    kappa0: Expression = field(default_factory=lambda: Expression.var(K0))
    kappa1: Expression = field(default_factory=lambda: Expression.var(K1))
    kappa_inf: Expression = field(default_factory=lambda: Expression.var(KINF))
    theta1: Expression = field(default_factory=lambda: Expression.var(TH1))
    theta2: Expression = field(default_factory=lambda: Expression.var(TH2))

    @classmethod
    def of(cls, k0: ExprLike, k1: ExprLike, kinf: ExprLike, th1: ExprLike, th2: ExprLike) -> ParameterSet:
        return cls(as_expr(k0), as_expr(k1), as_expr(kinf), as_expr(th1), as_expr(th2))

    def as_tuple(self) -> tuple[Expression, ...]:
        return (self.kappa0, self.kappa1, self.kappa_inf, self.theta1, self.theta2)

    def assignment(self) -> dict[int, Expression]:
        return dict(zip(PARAMS, self.as_tuple()))

    def is_symbolic(self) -> bool:
        return all(e == Expression.var(i) for i, e in zip(PARAMS, self.as_tuple()))


def kappa_expr(params: ParameterSet) -> Expression:
    k0, k1, kinf, th1, th2 = params.as_tuple()
    return ((k0 + k1 + th1 + th2 - 1) ** 2 - kinf**2) / 4


PI_ASSIGNMENT = {
    Q1: Expression.var(Q2), P1: Expression.var(P2), Q2: Expression.var(Q1), P2: Expression.var(P1),
    T: Expression.var(S), S: Expression.var(T),
    TH1: Expression.var(TH2), TH2: Expression.var(TH1),
}


def apply_pi(f: Expression) -> Expression:
    """Swap (q1,p1,t,theta1) with (q2,p2,s,theta2)."""
    return substitute(f, PI_ASSIGNMENT)


def _half(qi: Expression, pi: Expression, qj: Expression, t: Expression, s: Expression,
          kap: Expression, k0, k1, th1, th2) -> Expression:
    prefactor = -(qi * (qi - 1) * (qi - t) * (qi - s) * (qj - t)) / ((qi - qj) * t * (t - 1) * (t - s))
    brace = (
        pi**2
        + kap / (qi * (qi - 1))
        - ((th1 - 1) / (qi - t) + th2 / (qi - s) + k0 / qi + k1 / (qi - 1)) * pi
    )
    return prefactor * brace


def hamiltonian_h1(params: ParameterSet | None = None) -> Expression:
    params = params or ParameterSet()
    k0, k1, _, th1, th2 = params.as_tuple()
    kap = kappa_expr(params)
    q1, p1, q2, p2 = (Expression.var(i) for i in (Q1, P1, Q2, P2))
    t, s = Expression.var(T), Expression.var(S)
    return _half(q1, p1, q2, t, s, kap, k0, k1, th1, th2) + _half(q2, p2, q1, t, s, kap, k0, k1, th1, th2)


def hamilton_direction(h: Expression, coord: int) -> Expression:
    """Right-hand side of Hamilton's equation for ``coord`` under ``h``."""
    other, sign = _CONJUGATE[coord]
    d = h.diff(other)
    return d if sign > 0 else -d


def hamiltonian_field(h: Expression) -> tuple[Expression, ...]:
    return tuple(hamilton_direction(h, c) for c in (Q1, P1, Q2, P2))


@dataclass(frozen=True)
class GarnierSystem:
    """Two Hamiltonians and their vector fields, ordered (dq1, dp1, dq2, dp2)."""

    h1: Expression
    h2: Expression
    field_t: tuple[Expression, ...]
    field_s: tuple[Expression, ...]
    name: str = "garnier"

    @classmethod
    def from_hamiltonians(cls, h1: ExprLike, h2: ExprLike, name: str = "custom") -> GarnierSystem:
        h1, h2 = as_expr(h1), as_expr(h2)
        return cls(h1, h2, hamiltonian_field(h1), hamiltonian_field(h2), name)

    def hamiltonian(self, direction: str) -> Expression:
        return {"t": self.h1, "s": self.h2}[direction]

    def field(self, direction: str) -> tuple[Expression, ...]:
        return {"t": self.field_t, "s": self.field_s}[direction]

    def with_parameters(self, assignment: dict[int, ExprLike]) -> GarnierSystem:
        """Substitute values or expressions for the parameter indeterminates."""
        return GarnierSystem.from_hamiltonians(
            substitute(self.h1, assignment), substitute(self.h2, assignment), self.name
        )


@lru_cache(maxsize=1)
def _symbolic_pair() -> tuple[Expression, Expression]:
    h1 = hamiltonian_h1()
    return h1, apply_pi(h1)


def build_system(params: ParameterSet | None = None) -> GarnierSystem:
    h1, h2 = _symbolic_pair()
    sys = GarnierSystem.from_hamiltonians(h1, h2, "garnier")
    if params is None or params.is_symbolic():
        return sys
    return sys.with_parameters(params.assignment())


def poisson_bracket(f: Expression, g: Expression) -> Expression:
    """{f, g} in the canonical pairs (q1, p1), (q2, p2); t and s are constants."""
    f, g = as_expr(f), as_expr(g)
    out = Expression()
    for q, p in ((Q1, P1), (Q2, P2)):
        fq, fp = f.diff(q), f.diff(p)
        if not fq.is_zero():
            out = out + fq * g.diff(p)
        if not fp.is_zero():
            out = out - fp * g.diff(q)
    return out


def total_derivative(f: ExprLike, direction: str, sys: GarnierSystem) -> Expression:
    f = as_expr(f)
    var = {"t": T, "s": S}[direction]
    return f.diff(var) + poisson_bracket(f, sys.hamiltonian(direction))


@dataclass(frozen=True)
class CompatibilityReport:
    sign: str  # "+", "-", "neither" or "both"
    residual_is_base_function: bool
    residual_plus: Expression
    residual_minus: Expression
    passes: dict[str, bool]


def _phase_free(e: Expression, mode: str) -> bool:
    return all(equals(e.diff(v), 0, mode=mode) for v in (Q1, P1, Q2, P2))


def check_compatibility(sys: GarnierSystem, mode: str = "exact") -> CompatibilityReport:
    """Test dh1/ds - dh2/dt +/- {h1, h2} for vanishing phase gradient."""
    base = sys.h1.diff(S) - sys.h2.diff(T)
    br = poisson_bracket(sys.h1, sys.h2)
    plus, minus = base + br, base - br
    passes = {"+": _phase_free(plus, mode), "-": _phase_free(minus, mode)}
    if passes["+"] and passes["-"]:
        sign = "both"
    elif passes["+"]:
        sign = "+"
    elif passes["-"]:
        sign = "-"
    else:
        sign = "neither"
    return CompatibilityReport(sign, sign != "neither", plus, minus, passes)
