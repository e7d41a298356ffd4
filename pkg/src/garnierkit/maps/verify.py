"""Symmetry, polynomiality and conjugation verifiers."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from ..exactalg import (
    BASE, PARAMS, PHASE, S, T, VARIABLES,
    Expression, PoleError, equals, eval_at, is_polynomial_in, random_point, substitute,
)
from ..exactalg.identity import SAMPLE_HEIGHT, Verdict
from ..garnier import GarnierSystem, build_system, hamilton_direction, total_derivative
from .birational import (
    TRANSFORMED, BirationalMap, UnsupportedMapError, compose, inverse, is_identity,
)
from .catalog import catalog_get

WITNESS_HEIGHT = 10**3
WITNESS_ATTEMPTS = 100
PHASE_LABELS = ("q1", "p1", "q2", "p2")
DIRECTIONS = ("t", "s")


@dataclass
class SymmetryReport:
    map_name: str
    mode: str
    residuals: dict[tuple[str, str], Expression | None]
    residual_ok: dict[tuple[str, str], bool]
    passed: bool
    witness: dict | None = None
    error_bound: float = 0.0

    def failing(self) -> list[tuple[str, str]]:
        return [k for k, ok in self.residual_ok.items() if not ok]


def primed_system(g: BirationalMap, sys: GarnierSystem) -> GarnierSystem:
    if g.has_identity_params():
        return sys
    return sys.with_parameters(dict(zip(PARAMS, g.param_fwd)))


def _rhs_parts(g: BirationalMap, sys_p: GarnierSystem, k: int, d: str):
    """Pairs (dBase/dd, Hamilton direction under the primed Hamiltonian), uncomposed."""
    dvar = T if d == "t" else S
    out = []
    for base_img, h in zip(g.base_fwd, (sys_p.h1, sys_p.h2)):
        coef = base_img.diff(dvar)
        if not coef.is_zero():
            out.append((coef, hamilton_direction(h, PHASE[k])))
    return out


def _witness_for(res: Expression, rng: random.Random):
    for _ in range(WITNESS_ATTEMPTS):
        x = random_point(rng, WITNESS_HEIGHT, avoid=[res.den])
        val = eval_at(res, x)
        if val != 0:
            return x, val
    return None, None


def check_symmetry(g: BirationalMap, sys: GarnierSystem, mode: str = "exact",
                   trials: int = 20, seed: int = 0) -> SymmetryReport:
    """Does ``g`` carry solutions of ``sys`` to solutions of the primed system?

    For each image coordinate F and direction d the residual is
    D_d F - sum_e dBase_e/dd * (Hamilton direction of F under h_e') ∘ g.
    """
    sys_p = primed_system(g, sys)
    sub = g.phase_base_assignment()
    rng = random.Random(seed)
    if mode == "probabilistic":
        return _check_symmetry_sampled(g, sys, sys_p, trials, rng)
    residuals, ok = {}, {}
    witness = None
    for d in DIRECTIONS:
        for k, label in enumerate(PHASE_LABELS):
            lhs = total_derivative(g.phase_fwd[k], d, sys)
            rhs = Expression()
            for coef, direc in _rhs_parts(g, sys_p, k, d):
                rhs = rhs + coef * substitute(direc, sub)
            res = lhs - rhs
            key = (label, d)
            residuals[key] = res
            ok[key] = bool(equals(res, 0, mode="exact"))
            if not ok[key] and witness is None:
                x, val = _witness_for(res, rng)
                if x is not None:
                    witness = {"component": label, "direction": d, "point": _point_dict(x), "value": val}
    return SymmetryReport(g.name, "exact", residuals, ok, all(ok.values()), witness)


def _point_dict(x) -> dict[str, Fraction]:
    return dict(zip(VARIABLES, x))


def _check_symmetry_sampled(g, sys, sys_p, trials, rng) -> SymmetryReport:
    lhs = {}
    parts = {}
    for d in DIRECTIONS:
        for k, label in enumerate(PHASE_LABELS):
            lhs[(label, d)] = total_derivative(g.phase_fwd[k], d, sys)
            parts[(label, d)] = _rhs_parts(g, sys_p, k, d)
    ok = {key: True for key in lhs}
    witness = None
    max_degree = 0
    for e in lhs.values():
        max_degree = max(max_degree, e.num.total_degree() + e.den.total_degree())
    done = 0
    attempts = 0
    while done < trials:
        attempts += 1
        if attempts > trials * 100:
            raise RuntimeError(f"{g.name}: could not find admissible sample points")
        x = random_point(rng)
        try:
            image = tuple(eval_at(c, x) for c in g.phase_fwd + g.base_fwd) + tuple(x[6:])
            vals = {}
            for key, left in lhs.items():
                right = sum((eval_at(c, x) * eval_at(direc, image) for c, direc in parts[key]), Fraction(0))
                vals[key] = eval_at(left, x) - right
        except PoleError:
            continue
        done += 1
        for key, v in vals.items():
            if v != 0:
                ok[key] = False
                if witness is None:
                    witness = {"component": key[0], "direction": key[1], "point": _point_dict(x), "value": v}
    passed = all(ok.values())
    # residual degree is not formed explicitly; bound it generously by the lhs degree times map degree
    map_degree = max(c.num.total_degree() + c.den.total_degree() for c in g.phase_fwd + g.base_fwd)
    bound = min(1.0, 2 * max_degree * max(map_degree, 1) / (2 * SAMPLE_HEIGHT + 1)) ** trials if passed else 0.0
    return SymmetryReport(g.name, "probabilistic", {k: None for k in lhs}, ok, passed, witness, bound)


def verify_time_correction(g: BirationalMap, mode: str = "exact") -> bool:
    """Explicit time derivatives of the phase components are Hamiltonian with the stored shifts."""
    inv_sub = dict(zip(PHASE + BASE, g.phase_inv + g.base_inv))
    shifts = g.time_correction or (Expression(), Expression())
    for dvar, shift in zip(BASE, shifts):
        for k, comp in enumerate(g.phase_fwd):
            explicit = substitute(comp.diff(dvar), inv_sub)
            if not equals(explicit, hamilton_direction(shift, PHASE[k]), mode=mode):
                return False
    return True


def transform_system(g: BirationalMap, sys: GarnierSystem) -> GarnierSystem:
    """Express ``sys`` in the coordinates produced by ``g``.

    Supported for maps with identity base and parameter action; phase parts
    that depend on t or s need a stored Hamiltonian shift.
    """
    if not g.has_identity_base() or not g.has_identity_params():
        raise UnsupportedMapError(f"{g.name}: only maps fixing (t, s) and the parameters can transform a system")
    if g.is_time_dependent() and g.time_correction is None:
        raise UnsupportedMapError(f"{g.name}: phase components depend on t or s and no Hamiltonian shift is known")
    if g.name == "identity":
        return sys
    inv_sub = dict(zip(PHASE, g.phase_inv))
    shifts = g.time_correction or (Expression(), Expression())
    h1 = substitute(sys.h1, inv_sub) + shifts[0]
    h2 = substitute(sys.h2, inv_sub) + shifts[1]
    return GarnierSystem.from_hamiltonians(h1, h2, f"{sys.name}|{g.name}")


def check_polynomiality(sys: GarnierSystem) -> bool:
    exprs = (sys.h1, sys.h2) + sys.field_t + sys.field_s
    return all(is_polynomial_in(e, PHASE) for e in exprs)


@lru_cache(maxsize=1)
def transformed_system() -> GarnierSystem:
    """The Garnier system after the polynomializing change ``phi1``."""
    return transform_system(catalog_get("phi1"), build_system())


@dataclass
class ConjugationResult:
    name: str
    matches: bool
    mismatched: list[str] = field(default_factory=list)
    symmetric: bool = False


# the inner word is read as substitution operators: s1 acts on the point first
CONJUGATION_WORDS = {
    "conj_s1s0": ("s0", "s1"),
    "conj_s1": ("s1",),
    "conj_sigma2": ("sigma2",),
}


def conjugate_by_phi1(word: tuple[str, ...]) -> BirationalMap:
    phi = catalog_get("phi1")
    m = inverse(phi)
    for name in reversed(word):
        m = compose(catalog_get(name), m)
    return compose(phi, m)


def verify_eq6(mode: str = "exact", trials: int = 20, seed: int = 0) -> dict[str, ConjugationResult]:
    out = {}
    sys = transformed_system()
    labels = VARIABLES
    for name, word in CONJUGATION_WORDS.items():
        closed = catalog_get(name)
        composed = conjugate_by_phi1(word)
        a = composed.phase_fwd + composed.base_fwd + composed.param_fwd
        b = closed.phase_fwd + closed.base_fwd + closed.param_fwd
        bad = [labels[i] for i, (x, y) in enumerate(zip(a, b)) if not equals(x, y, mode=mode, trials=trials, seed=seed)]
        rep = check_symmetry(closed, sys, mode=mode, trials=trials, seed=seed)
        out[name] = ConjugationResult(name, not bad, bad, rep.passed)
    return out


def polynomial_in_chart(name: str) -> bool:
    g = catalog_get(name)
    return check_polynomiality(transform_system(g, transformed_system()))


__all__ = [
    "ConjugationResult", "SymmetryReport", "check_polynomiality", "check_symmetry", "conjugate_by_phi1",
    "is_identity", "polynomial_in_chart", "primed_system", "transform_system", "transformed_system",
    "verify_eq6", "verify_time_correction", "TRANSFORMED", "Verdict",
]
