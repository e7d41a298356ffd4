"""Shared numeric fixtures: parameters, start point, paths, and exact-vs-float field comparison."""

import random
from fractions import Fraction

from garnierkit.exactalg import PARAMS, PoleError, eval_at
from garnierkit.flow import BasePath, NumericPoint, eval_field_numeric

PARAM_VALUES = (Fraction(1, 3), Fraction(1, 5), Fraction(2, 7), Fraction(3, 11), Fraction(1, 13))
START = NumericPoint(0.35, 0.2, 0.7, -0.3, 0.2, 0.6)
SHORT_PATH = BasePath.of((0.2, 0.6), (0.35, 0.75))
L_PATH = BasePath.of((0.2, 0.6), (0.3, 0.6), (0.3, 0.7))
L_PATH_T = BasePath.of((0.2, 0.6), (0.2, 0.7), (0.3, 0.7))


def dyadic(rng, lo, hi, bits=12):
    """A random number in [lo, hi] that is exactly representable as a float."""
    return Fraction(round(rng.uniform(lo, hi) * 2**bits), 2**bits)


def random_field_point(rng: random.Random, margin=0.02):
    while True:
        q1, q2 = dyadic(rng, -2, 2), dyadic(rng, -2, 2)
        t, s = dyadic(rng, -2, 2), dyadic(rng, -2, 2)
        p1, p2 = dyadic(rng, -3, 3), dyadic(rng, -3, 3)
        singular = (t, t - 1, s, s - 1, t - s, q1, q1 - 1, q2, q2 - 1, q1 - q2, q1 - t, q1 - s, q2 - t, q2 - s)
        if min(abs(v) for v in singular) > margin:
            return (q1, p1, q2, p2, t, s)


def field_relative_error(cs, system, x) -> float:
    """Componentwise relative error of the compiled fields against exact evaluation."""
    full = list(x) + [None] * 5
    for i, v in zip(PARAMS, PARAM_VALUES):
        full[i] = v
    ft, fs = eval_field_numeric(cs, [float(v) for v in x])
    worst = 0.0
    for numeric, comps in ((ft, system.field_t), (fs, system.field_s)):
        try:
            exact = [eval_at(c, full) for c in comps]
        except PoleError:
            return 0.0
        scale = max(abs(float(e)) for e in exact) or 1.0
        for n, e in zip(numeric, exact):
            ref = abs(float(e)) if e != 0 else scale
            worst = max(worst, float(abs(Fraction(n) - e)) / ref)
    return worst
