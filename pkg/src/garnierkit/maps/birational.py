"""Birational maps on (phase, time; parameters) and their basic operations."""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Sequence

from ..exactalg import (
    BASE, NVARS, PARAMS, PHASE, VARIABLES,
    Expression, PoleError, as_expr, equals, eval_at, substitute,
)
from ..exactalg.expression import ExprLike
from ..garnier import poisson_bracket

ORIGINAL = "original"
TRANSFORMED = "transformed"


class UnknownMapError(KeyError):
    pass


class UnsupportedMapError(ValueError):
    pass


def _vars(indices) -> tuple[Expression, ...]:
    return tuple(Expression.var(i) for i in indices)


@dataclass(frozen=True)
class BirationalMap:
    """Forward and stored inverse components of a map with a parameter action.

    ``phase_fwd``/``base_fwd``/``param_fwd`` are images of (q1,p1,q2,p2),
    (t,s) and (k0,k1,kinf,th1,th2) written in the source variables.  The
    inverse components are written in the target variables and target
    parameters.  ``time_correction`` holds Hamiltonian shifts (t- and
    s-direction, target variables) needed when the phase part depends on time.
    """

    name: str
    phase_fwd: tuple[Expression, ...]
    base_fwd: tuple[Expression, ...]
    param_fwd: tuple[Expression, ...]
    phase_inv: tuple[Expression, ...]
    base_inv: tuple[Expression, ...]
    source: str = ORIGINAL
    target: str = ORIGINAL
    kind: str = "backlund"
    role: str = ""
    time_correction: tuple[Expression, Expression] | None = None

    def __post_init__(self):
        for label, comps, n in (("phase_fwd", self.phase_fwd, 4), ("base_fwd", self.base_fwd, 2),
                                ("param_fwd", self.param_fwd, 5), ("phase_inv", self.phase_inv, 4),
                                ("base_inv", self.base_inv, 2)):
            if len(comps) != n:
                raise ValueError(f"{self.name}: {label} needs {n} components")
        for e in self.base_fwd + self.base_inv:
            if e.variables() & set(PHASE):
                raise ValueError(f"{self.name}: base components must not involve phase variables")
        param_affine_parts(self.param_fwd)  # validates the parameter action

    @classmethod
    def make(cls, name: str, phase_fwd: Sequence[ExprLike], base_fwd: Sequence[ExprLike],
             param_fwd: Sequence[ExprLike], phase_inv: Sequence[ExprLike], base_inv: Sequence[ExprLike],
             **kw) -> BirationalMap:
        conv = lambda xs: tuple(as_expr(x) for x in xs)  # noqa: E731
        return cls(name, conv(phase_fwd), conv(base_fwd), conv(param_fwd), conv(phase_inv), conv(base_inv), **kw)

    @property
    def param_inv(self) -> tuple[Expression, ...]:
        return invert_param_action(self.param_fwd)

    def forward_assignment(self) -> dict[int, Expression]:
        return dict(zip(PHASE + BASE + PARAMS, self.phase_fwd + self.base_fwd + self.param_fwd))

    def inverse_assignment(self) -> dict[int, Expression]:
        return dict(zip(PHASE + BASE + PARAMS, self.phase_inv + self.base_inv + self.param_inv))

    def phase_base_assignment(self) -> dict[int, Expression]:
        return dict(zip(PHASE + BASE, self.phase_fwd + self.base_fwd))

    def has_identity_base(self) -> bool:
        return self.base_fwd == _vars(BASE)

    def has_identity_params(self) -> bool:
        return self.param_fwd == _vars(PARAMS)

    def is_time_dependent(self) -> bool:
        return any(e.variables() & set(BASE) for e in self.phase_fwd)


def identity_map(coords: str = ORIGINAL) -> BirationalMap:
    ph, bs, pr = _vars(PHASE), _vars(BASE), _vars(PARAMS)
    return BirationalMap("identity", ph, bs, pr, ph, bs, coords, coords, "identity", "identity map")


def param_affine_parts(images: Sequence[Expression]) -> tuple[list[list[Fraction]], list[Fraction]]:
    """Matrix and offset of an affine parameter action; must be a signed permutation."""
    matrix, offset = [], []
    zero = {i: 0 for i in PARAMS}
    for e in images:
        if e.variables() - set(PARAMS) or not e.is_polynomial() or e.num.total_degree() > 1:
            raise ValueError(f"parameter image {e} is not affine in the parameters")
        matrix.append([e.diff(j).constant_value() if not e.diff(j).is_zero() else Fraction(0) for j in PARAMS])
        offset.append(substitute(e, zero).constant_value())
    for row in matrix:
        if sorted(abs(x) for x in row) != [0, 0, 0, 0, 1]:
            raise ValueError("parameter action must be a signed permutation")
    if sorted(next(j for j, x in enumerate(row) if x) for row in matrix) != list(range(5)):
        raise ValueError("parameter action is not invertible")
    return matrix, offset


def invert_param_action(images: Sequence[Expression]) -> tuple[Expression, ...]:
    matrix, offset = param_affine_parts(images)
    # b = M a + c with M a signed permutation, so a = M^T (b - c)
    b = _vars(PARAMS)
    out = []
    for j in range(5):
        acc = Expression()
        for i in range(5):
            if matrix[i][j]:
                acc = acc + matrix[i][j] * (b[i] - offset[i])
        out.append(acc)
    return tuple(out)


def param_permutation(g: BirationalMap) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Slot permutation and signs: new slot i takes sign[i] * old slot perm[i]."""
    matrix, offset = param_affine_parts(g.param_fwd)
    if any(offset):
        raise ValueError(f"{g.name}: parameter action has a constant offset")
    perm = tuple(next(j for j, x in enumerate(row) if x) for row in matrix)
    signs = tuple(int(row[perm[i]]) for i, row in enumerate(matrix))
    return perm, signs


def inverse(g: BirationalMap) -> BirationalMap:
    corr = None
    if g.time_correction is not None:
        # shifts of the inverse live in source coordinates: -corr o g
        corr = tuple(-substitute(c, g.forward_assignment()) for c in g.time_correction)
    return BirationalMap(
        f"inv({g.name})", g.phase_inv, g.base_inv, g.param_inv, g.phase_fwd, g.base_fwd,
        g.target, g.source, g.kind, g.role, corr,
    )


def compose(g: BirationalMap, h: BirationalMap) -> BirationalMap:
    """The point map ``g ∘ h``: apply ``h`` first, then ``g``."""
    if h.target != g.source:
        raise ValueError(f"cannot compose {g.name} ({g.source} coords) after {h.name} ({h.target} coords)")
    hf = h.forward_assignment()
    gi = g.inverse_assignment()
    fwd = tuple(substitute(c, hf) for c in g.phase_fwd + g.base_fwd + g.param_fwd)
    inv = tuple(substitute(c, gi) for c in h.phase_inv + h.base_inv)
    return BirationalMap(
        f"{g.name}∘{h.name}", fwd[:4], fwd[4:6], fwd[6:], inv[:4], inv[4:],
        h.source, g.target, "composite", f"composition of {g.name} after {h.name}",
    )


def is_identity(g: BirationalMap, mode: str = "exact") -> bool:
    comps = g.phase_fwd + g.base_fwd + g.param_fwd
    return all(equals(c, v, mode=mode) for c, v in zip(comps, _vars(PHASE + BASE + PARAMS)))


def apply_point(g: BirationalMap, x: Sequence, params: Sequence) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
    """Exact image of a point (q1,p1,q2,p2,t,s) with parameters (k0,k1,kinf,th1,th2)."""
    if len(x) != 6 or len(params) != 5:
        raise ValueError("need 6 coordinates and 5 parameters")
    point = tuple(x) + tuple(params)
    labels = VARIABLES[:6] + VARIABLES[6:]
    out = []
    for label, comp in zip(labels, g.phase_fwd + g.base_fwd + g.param_fwd):
        try:
            out.append(eval_at(comp, point))
        except PoleError as exc:
            raise PoleError(
                f"{g.name}: image of {label} = {comp} has a pole; denominator {exc.component} vanishes",
                component=exc.component,
            ) from None
    return tuple(out[:6]), tuple(out[6:])


def pullback(g: BirationalMap, f: ExprLike) -> Expression:
    """``f ∘ g`` including the parameter action."""
    return substitute(as_expr(f), g.forward_assignment())


def verify_inverse(g: BirationalMap, mode: str = "exact") -> bool:
    inv = inverse(g)
    return is_identity(compose(inv, g), mode) and is_identity(compose(g, inv), mode)


def check_symplectic(g: BirationalMap, mode: str = "exact") -> bool:
    Q1, P1, Q2, P2 = g.phase_fwd
    one_pairs = ((Q1, P1), (Q2, P2))
    zero_pairs = ((Q1, Q2), (P1, P2), (Q1, P2), (Q2, P1))
    return all(equals(poisson_bracket(a, b), 1, mode=mode) for a, b in one_pairs) and all(
        equals(poisson_bracket(a, b), 0, mode=mode) for a, b in zero_pairs
    )


def with_name(g: BirationalMap, name: str) -> BirationalMap:
    return replace(g, name=name)


__all__ = [
    "ORIGINAL", "TRANSFORMED", "BirationalMap", "UnknownMapError", "UnsupportedMapError", "apply_point",
    "check_symplectic", "compose", "identity_map", "inverse", "invert_param_action", "is_identity",
    "param_affine_parts", "param_permutation", "pullback", "verify_inverse", "with_name", "NVARS",
]
