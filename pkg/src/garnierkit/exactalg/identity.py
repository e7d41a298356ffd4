"""Identity testing for rational functions: exact and randomized."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .expression import Expression, ExprLike, as_expr
from .poly import NVARS, Poly

SAMPLE_HEIGHT = 10**6
MAX_RETRIES = 100


@dataclass(frozen=True)
class Verdict:
    """Outcome of an identity test.

    ``error_bound`` is the probability that ``equal`` is a false positive; it is
    0 for exact mode and for any "not equal" answer (a disagreeing point is a
    certificate).
    """

    equal: bool
    mode: str
    error_bound: float = 0.0

    def __bool__(self) -> bool:
        return self.equal


def random_point(
    rng: random.Random,
    height: int = SAMPLE_HEIGHT,
    avoid: Sequence[Poly] = (),
    max_retries: int = MAX_RETRIES,
) -> tuple[Fraction, ...]:
    """Random rational point with numerators and denominators bounded by ``height``.

    Resamples until none of the polynomials in ``avoid`` vanish there.
    """
    for _ in range(max_retries):
        x = tuple(Fraction(rng.randint(-height, height), rng.randint(1, height)) for _ in range(NVARS))
        if all(p.evaluate(x) != 0 for p in avoid):
            return x
    raise RuntimeError(f"no admissible point found after {max_retries} attempts")


def equals(a: ExprLike, b: ExprLike, mode: str = "exact", trials: int = 20, seed: int = 0) -> Verdict:
    a, b = as_expr(a), as_expr(b)
    if mode == "exact":
        return Verdict((a.num * b.den - b.num * a.den).is_zero(), "exact")
    if mode != "probabilistic":
        raise ValueError(f"unknown equality mode {mode!r}")
    if trials < 1:
        raise ValueError("trials must be positive")
    rng = random.Random(seed)
    avoid = [p for p in (a.den, b.den) if not p.is_constant()]
    for _ in range(trials):
        x = random_point(rng, avoid=avoid)
        if a.num.evaluate(x) / a.den.evaluate(x) != b.num.evaluate(x) / b.den.evaluate(x):
            return Verdict(False, "probabilistic")
    # Schwartz-Zippel on the cross-multiplied difference; each coordinate has
    # 2*height+1 distinct values once its denominator is fixed
    degree = max(a.num.total_degree() + b.den.total_degree(), b.num.total_degree() + a.den.total_degree(), 0)
    per_trial = min(1.0, degree / (2 * SAMPLE_HEIGHT + 1))
    return Verdict(True, "probabilistic", per_trial**trials)


def is_zero(f: Expression, mode: str = "exact", trials: int = 20, seed: int = 0) -> Verdict:
    return equals(f, 0, mode=mode, trials=trials, seed=seed)
