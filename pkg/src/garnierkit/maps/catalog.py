"""Named transformations of the Garnier system.

Charts, the conjugated symmetries and ``S0`` act on the coordinates produced
by ``phi1``, which reuse the names q1, p1, q2, p2.
"""

from __future__ import annotations

from functools import lru_cache

from ..exactalg import Expression
from .birational import ORIGINAL, TRANSFORMED, BirationalMap, UnknownMapError, identity_map

q1, p1, q2, p2, t, s, k0, k1, kinf, th1, th2 = (Expression.var(i) for i in range(11))
half = Expression.const(1) / 2
PARAMS = (k0, k1, kinf, th1, th2)


def _c_minus():
    return (k0 + k1 - kinf + th1 + th2 - 1) / 2


def _c_plus():
    return (k0 + k1 + kinf + th1 + th2 - 1) / 2


def _involution(name, phase, base, params, **kw) -> BirationalMap:
    return BirationalMap.make(name, phase, base, params, phase, base, **kw)


def _backlund():
    out = {}
    cm, cp = _c_minus(), _c_plus()
    out["pi"] = _involution("pi", (q2, p2, q1, p1), (s, t), (k0, k1, kinf, th2, th1),
                            role="exchange of the two Hamiltonians")
    out["s0"] = BirationalMap.make(
        "s0",
        (1 / q1, -(q1 * p1 - cm) * q1, 1 / q2, -(q2 * p2 - cm) * q2), (1 / t, 1 / s), (-kinf, k1, k0, th1, th2),
        # inverse in target parameters: old k0 = new kinf, old kinf = -new k0
        (1 / q1, -(q1 * p1 - cp) * q1, 1 / q2, -(q2 * p2 - cp) * q2), (1 / t, 1 / s),
        role="Bäcklund transformation s0",
    )
    out["s1"] = _involution("s1", (q1, p1 - k0 / q1, q2, p2 - k0 / q2), (t, s), (-k0, k1, kinf, th1, th2),
                            role="Bäcklund transformation s1")
    out["s2"] = _involution("s2", (q1, p1 - k1 / (q1 - 1), q2, p2 - k1 / (q2 - 1)), (t, s),
                            (k0, -k1, kinf, th1, th2), role="Bäcklund transformation s2")
    out["s3"] = _involution("s3", (q1, p1, q2, p2), (t, s), (k0, k1, -kinf, th1, th2),
                            role="Bäcklund transformation s3")
    out["s4"] = _involution("s4", (q1, p1 - th1 / (q1 - t), q2, p2 - th1 / (q2 - t)), (t, s),
                            (k0, k1, kinf, -th1, th2), role="Bäcklund transformation s4")
    out["s5"] = _involution("s5", (q1, p1 - th2 / (q1 - s), q2, p2 - th2 / (q2 - s)), (t, s),
                            (k0, k1, kinf, th1, -th2), role="Bäcklund transformation s5")
    out["sigma1"] = _involution("sigma1", (1 - q1, -p1, 1 - q2, -p2), (1 - t, 1 - s), (k1, k0, kinf, th1, th2),
                                role="diagram automorphism sigma1")
    out["sigma2"] = _involution("sigma2", (q2, p2, q1, p1), (s, t), (k0, k1, kinf, th2, th1),
                                role="diagram automorphism sigma2")
    out["sigma3"] = _involution(
        "sigma3",
        ((s - q1) / (s - 1), -(s - 1) * p1, (s - q2) / (s - 1), -(s - 1) * p2), ((s - t) / (s - 1), s / (s - 1)),
        (th2, k1, kinf, th1, k0), role="diagram automorphism sigma3",
    )
    out["sigma4"] = _involution(
        "sigma4", (1 / q1, -(q1 * p1 - cp) * q1, 1 / q2, -(q2 * p2 - cp) * q2), (1 / t, 1 / s),
        (kinf, k1, k0, th1, th2), role="diagram automorphism sigma4",
    )
    return out


def _phi1():
    cm = _c_minus()
    old_p1 = cm * q1 - p1 * q1**2
    return BirationalMap.make(
        "phi1",
        (1 / (q1 - q2), -((q1 - q2) * p1 - cm) * (q1 - q2), q2, p2 + p1), (t, s), PARAMS,
        (q2 + 1 / q1, old_p1, q2, p2 - old_p1), (t, s),
        source=ORIGINAL, target=TRANSFORMED, kind="coordinate-change",
        role="birational symplectic change to a polynomial Hamiltonian system",
    )


def _chart(name, fwd, inv, correction=None, role=""):
    return BirationalMap.make(
        name, fwd, (t, s), PARAMS, inv, (t, s), source=TRANSFORMED, target=TRANSFORMED, kind="chart",
        role=role or f"holomorphy chart {name}", time_correction=correction,
    )


def _charts():
    zero = Expression()
    shift = -1 / p2
    return {
        "r0": _chart("r0", (q1, p1, -(q2 * p2 - k0) * p2, 1 / p2), (q1, p1, (k0 - q2 * p2) * p2, 1 / p2)),
        "r1": _chart("r1", (q1, p1, -((q2 - 1) * p2 - k1) * p2, 1 / p2), (q1, p1, 1 + (k1 - q2 * p2) * p2, 1 / p2)),
        "r2": _chart(
            "r2",
            ((q1 * q2 + 1) * q2, p1 / q2**2, 1 / q2, -(q2 * p2 - 2 * (q1 * q2 + half) * p1 / q2) * q2),
            ((q1 * q2 - 1) * q2, p1 / q2**2, 1 / q2, -p2 * q2**2 + (2 * q1 * q2 - 1) * p1),
        ),
        "r3": _chart("r3", (-(q1 * p1 + kinf) * p1, 1 / p1, q2, p2), (-(q1 * p1 + kinf) * p1, 1 / p1, q2, p2)),
        "r4": _chart("r4", (q1, p1, -((q2 - t) * p2 - th1) * p2, 1 / p2), (q1, p1, t + (th1 - q2 * p2) * p2, 1 / p2),
                     correction=(shift, zero)),
        "r5": _chart("r5", (q1, p1, -((q2 - s) * p2 - th2) * p2, 1 / p2), (q1, p1, s + (th2 - q2 * p2) * p2, 1 / p2),
                     correction=(zero, shift)),
        "r6": _chart("r6", (q1, p1 + p2 / q1**2, q2 + 1 / q1, p2), (q1, p1 - p2 / q1**2, q2 - 1 / q1, p2)),
    }


def _transformed_symmetries():
    kw = dict(source=TRANSFORMED, target=TRANSFORMED)
    conj_s1s0 = (
        -(q1 * q2 + 1) * q2, -p1 / q2**2, 1 / q2, -(q2 * p2 - 2 * (q1 * q2 + half) * p1 / q2) * q2,
    )
    conj_s1 = (q1, p1 - k0 * q2 / (q1 * q2 + 1), q2, p2 - k0 * (2 * q1 * q2 + 1) / (q2 * (q1 * q2 + 1)))
    conj_sigma2 = (-q1, -(p1 + p2 / q1**2), q2 + 1 / q1, p2)
    return {
        "conj_s1s0": _involution("conj_s1s0", conj_s1s0, (1 / t, 1 / s), (-kinf, k1, -k0, th1, th2),
                                 kind="conjugate", role="phi1 ∘ s1 ∘ s0 ∘ phi1^-1 in closed form", **kw),
        "conj_s1": _involution("conj_s1", conj_s1, (t, s), (-k0, k1, kinf, th1, th2),
                               kind="conjugate", role="phi1 ∘ s1 ∘ phi1^-1 in closed form", **kw),
        "conj_sigma2": _involution("conj_sigma2", conj_sigma2, (s, t), (k0, k1, kinf, th2, th1),
                                   kind="conjugate", role="phi1 ∘ sigma2 ∘ phi1^-1 in closed form", **kw),
        "S0": _involution("S0", (q1, p1, q2, p2 - k0 / q2), (t, s), (-k0, k1, kinf, th1, th2),
                          kind="negative-control", role="shift attached to chart r0; not a symmetry", **kw),
    }


BACKLUND_NAMES = ("pi", "s0", "s1", "s2", "s3", "s4", "s5", "sigma1", "sigma2", "sigma3", "sigma4")
CHART_NAMES = tuple(f"r{i}" for i in range(7))
CONJUGATE_NAMES = ("conj_s1s0", "conj_s1", "conj_sigma2")
SIGMA_NAMES = ("sigma1", "sigma2", "sigma3", "sigma4")
ALL_NAMES = BACKLUND_NAMES + ("phi1", "S0") + CHART_NAMES + CONJUGATE_NAMES


@lru_cache(maxsize=1)
def _catalog() -> dict[str, BirationalMap]:
    cat = {}
    cat.update(_backlund())
    cat["phi1"] = _phi1()
    cat.update(_charts())
    cat.update(_transformed_symmetries())
    cat["identity"] = identity_map(ORIGINAL)
    return cat


def catalog_get(name: str) -> BirationalMap:
    try:
        return _catalog()[name]
    except KeyError:
        known = ", ".join(sorted(_catalog()))
        raise UnknownMapError(f"unknown map {name!r}; known maps: {known}") from None


def catalog_names() -> tuple[str, ...]:
    return ALL_NAMES


def provenance_table() -> str:
    """Human-readable listing: name, role, coordinates and components."""
    from ..exactalg import VARIABLES

    lines = []
    for name in ALL_NAMES:
        g = catalog_get(name)
        lines.append(f"{name}  [{g.kind}; {g.source} -> {g.target}]  {g.role}")
        for var, comp in zip(VARIABLES[:6], g.phase_fwd + g.base_fwd):
            lines.append(f"    {var} -> {comp}")
        for var, comp in zip(VARIABLES[6:], g.param_fwd):
            if comp != Expression.var(VARIABLES.index(var)):
                lines.append(f"    {var} -> {comp}")
        if g.time_correction is not None:
            for d, c in zip("ts", g.time_correction):
                if not c.is_zero():
                    lines.append(f"    Hamiltonian shift ({d}) : {c}")
    return "\n".join(lines)
