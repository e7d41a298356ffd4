"""Float evaluation of exact expressions via generated Python code."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from ..exactalg import BASE, PARAMS, PHASE, VARIABLES, Expression, Poly
from ..garnier import GarnierSystem

DEFAULT_GUARD = 1e-8
_ARGS = VARIABLES[:6]


class SingularityError(ArithmeticError):
    """A guarded denominator is (numerically) zero at the evaluation point."""

    def __init__(self, factor: str, value: float):
        super().__init__(f"denominator factor {factor} is {value:.3e} (guard tripped)")
        self.factor = factor
        self.value = value


def _float_literal(c: Fraction) -> str:
    return repr(float(c))


def poly_source(p: Poly) -> str:
    terms = []
    for mono, c in p.terms.items():
        if any(mono[6:]):
            raise ValueError("cannot compile: parameters must be substituted first")
        factors = [_float_literal(c)] if c != 1 else []
        for i, e in enumerate(mono[:6]):
            if e == 1:
                factors.append(_ARGS[i])
            elif e > 1:
                factors.append(f"{_ARGS[i]}**{e}")
        terms.append("*".join(factors) or "1.0")
    return " + ".join(terms) if terms else "0.0"


_SPLIT = 134217729.0  # 2**27 + 1


def _dd_poly_lines(p: Poly, out: str, powers: set) -> list[str]:
    """Straight-line code summing ``p`` with error-free products and exact-rounded summation.

    Each term is carried as an unevaluated pair (hi, lo); the pairs are added
    with math.fsum, so the result error is about u + cond * u**2.
    """
    lines = [f"{out} = []"]
    for mono, c in p.terms.items():
        if any(mono[6:]):
            raise ValueError("cannot compile: parameters must be substituted first")
        hi = float(c)
        lo = float(c - Fraction(hi))
        lines.append(f"h, l = {hi!r}, {lo!r}")
        for i, e in enumerate(mono[:6]):
            if not e:
                continue
            powers.add((i, e))
            v = f"_{_ARGS[i]}{e}"
            lines.append(
                f"c = _S * h; ah = c - (c - h); al = h - ah; ph = h * {v}h; "
                f"l = ((ah * {v}a - ph) + ah * {v}b + al * {v}a) + al * {v}b + h * {v}l + l * {v}h; h = ph"
            )
        lines.append(f"{out} += (h, l)")
    return lines


def _dd_power_lines(powers: set) -> list[str]:
    lines = []
    for i in sorted({i for i, _ in powers}):
        x = _ARGS[i]
        top = max(e for j, e in powers if j == i)
        lines.append(f"_{x}1h, _{x}1l = {x}, 0.0")
        for e in range(2, top + 1):
            lines.append(
                f"a = _{x}{e - 1}h; c = _S * a; ah = c - (c - a); al = a - ah; "
                f"c = _S * {x}; bh = c - (c - {x}); bl = {x} - bh; ph = a * {x}; "
                f"_{x}{e}h = ph; _{x}{e}l = ((ah * bh - ph) + ah * bl + al * bh) + al * bl + _{x}{e - 1}l * {x}"
            )
        for e in range(1, top + 1):
            lines.append(f"c = _S * _{x}{e}h; _{x}{e}a = c - (c - _{x}{e}h); _{x}{e}b = _{x}{e}h - _{x}{e}a")
    return lines


def compile_expressions_accurate(exprs: Sequence[Expression], name: str = "f_accurate") -> Callable:
    """Like :func:`compile_expressions` but compensated; slower, for accuracy-critical evaluation."""
    powers: set = set()
    body: list[str] = []
    outs = []
    dens: dict[Poly, str] = {}
    for k, e in enumerate(exprs):
        body += _dd_poly_lines(e.num, f"_n{k}", powers)
        if e.den.is_one():
            outs.append(f"_fsum(_n{k})")
            continue
        if e.den not in dens:
            dname = f"_d{len(dens)}"
            dens[e.den] = dname
            body += _dd_poly_lines(e.den, dname, powers)
        outs.append(f"_fsum(_n{k}) / _fsum({dens[e.den]})")
    lines = _dd_power_lines(powers) + body
    lines.append("return (" + ", ".join(outs) + ("," if len(outs) == 1 else "") + ")")
    return _compile(name, lines)


def _compile(name: str, body_lines: list[str]) -> Callable:
    src = f"def {name}({', '.join(_ARGS)}):\n" + "\n".join("    " + ln for ln in body_lines)
    ns: dict = {"_fsum": math.fsum, "_S": _SPLIT}
    exec(compile(src, f"<garnierkit:{name}>", "exec"), ns)
    fn = ns[name]
    fn.source = src
    return fn


def compile_expressions(exprs: Sequence[Expression], name: str = "f") -> Callable:
    """One function returning a tuple of float values; shared denominators are evaluated once."""
    dens: dict[Poly, str] = {}
    lines = []
    outs = []
    for k, e in enumerate(exprs):
        num = poly_source(e.num)
        if e.den.is_one():
            outs.append(f"({num})")
            continue
        if e.den not in dens:
            dname = f"_d{len(dens)}"
            dens[e.den] = dname
            lines.append(f"{dname} = {poly_source(e.den)}")
        outs.append(f"({num}) / {dens[e.den]}")
    lines.append("return (" + ", ".join(outs) + ("," if len(outs) == 1 else "") + ")")
    return _compile(name, lines)


def numeric_assignment(values: Sequence) -> dict[int, Fraction]:
    """Parameter values as exact rationals; floats keep their binary value."""
    return {i: Fraction(v) for i, v in zip(PARAMS, values)}


@dataclass
class CompiledSystem:
    """Vector fields of a system at fixed numeric parameters, plus singularity guards."""

    system: GarnierSystem
    params: tuple[Fraction, ...]
    guard: float
    _fields: Callable
    _factors: Callable
    factor_names: tuple[str, ...]
    _accurate: Callable | None = None

    def guard_check(self, x: Sequence[float]) -> None:
        vals = self._factors(*x)
        for name, v in zip(self.factor_names, vals):
            if not math.isfinite(v) or abs(v) <= self.guard:
                raise SingularityError(name, v)

    def fields(self, x: Sequence[float], check: bool = True) -> tuple[tuple[float, ...], tuple[float, ...]]:
        if check:
            self.guard_check(x)
        v = self._fields(*x)
        return v[:4], v[4:]

    def fields_accurate(self, x: Sequence[float], check: bool = True):
        if check:
            self.guard_check(x)
        if self._accurate is None:
            comps = self.system.field_t + self.system.field_s
            self._accurate = compile_expressions_accurate(comps, "fields_accurate")
        v = self._accurate(*x)
        return v[:4], v[4:]


def denominator_factors(exprs: Sequence[Expression]) -> list[Poly]:
    seen: list[Poly] = []
    for e in exprs:
        if e.den.is_constant():
            continue
        _, facs = e.den.factor()
        for f, _ in facs:
            f = f.scale(1 / f.leading_coefficient())
            if not f.is_constant() and f not in seen:
                seen.append(f)
    return seen


def singular_base_factors(exprs: Sequence[Expression]) -> list[Poly]:
    return [f for f in denominator_factors(exprs) if not (f.variables() & set(PHASE))]


def compile_system(sys: GarnierSystem, params: Sequence, guard: float = DEFAULT_GUARD) -> CompiledSystem:
    exact = tuple(Fraction(v) for v in params)
    if len(exact) != 5:
        raise ValueError("need five parameter values (k0, k1, kinf, th1, th2)")
    concrete = sys.with_parameters(numeric_assignment(exact))
    comps = concrete.field_t + concrete.field_s
    for e in comps:
        if e.variables() & set(PARAMS):
            raise ValueError("parameters remain after substitution")
    fields = compile_expressions(comps, "fields")
    factors = denominator_factors(comps)
    factor_exprs = [Expression(f) for f in factors]
    guard_fn = compile_expressions(factor_exprs, "guards") if factors else (lambda *a: ())
    names = tuple(str(e) for e in factor_exprs)
    return CompiledSystem(concrete, exact, guard, fields, guard_fn, names)


def eval_field_numeric(cs: CompiledSystem, x: Sequence[float], accurate: bool = True):
    """The two 4-vectors (dq1, dp1, dq2, dp2) along t and along s at ``x = (q1,p1,q2,p2,t,s)``.

    ``accurate`` selects the compensated program (relative error near one
    rounding even under heavy cancellation); the plain program is what the
    integrator calls.
    """
    return cs.fields_accurate(x) if accurate else cs.fields(x)


def compile_map(g, params: Sequence) -> tuple[Callable, tuple[Fraction, ...]]:
    """Float version of a birational map's 6 point components and its image parameters."""
    assign = numeric_assignment(params)
    from ..exactalg import substitute

    comps = [substitute(c, assign) for c in g.phase_fwd + g.base_fwd]
    new_params = tuple(substitute(c, assign).constant_value() for c in g.param_fwd)
    return compile_expressions(comps, g.name.replace("∘", "_").replace("(", "_").replace(")", "_")), new_params


__all__ = [
    "BASE", "CompiledSystem", "DEFAULT_GUARD", "SingularityError", "compile_expressions", "compile_map",
    "compile_system", "denominator_factors", "eval_field_numeric", "numeric_assignment", "poly_source",
]
