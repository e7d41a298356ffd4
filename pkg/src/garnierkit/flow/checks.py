"""Numerical cross-checks: path independence, symmetry residuals, convergence order."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from ..exactalg import PoleError
from ..garnier import GarnierSystem
from ..maps.birational import BirationalMap, inverse
from .compiled import DEFAULT_GUARD, compile_map, compile_system
from .integrate import DEFAULT_TOL, BasePath, NumericPoint, Trajectory, integrate

PATH_GAP_FLOOR = 1e-6


@dataclass(frozen=True)
class PathIndependenceReport:
    endpoint_gap: float
    passed: bool
    end_a: NumericPoint
    end_b: NumericPoint
    error_estimate: float


def path_independence(cs, start: NumericPoint, path_a: BasePath, path_b: BasePath,
                      tol: float = DEFAULT_TOL) -> PathIndependenceReport:
    """Integrate along two paths with common endpoints and compare the endpoints.

    The paths must be homotopic in the complement of the singular locus; that
    is the caller's responsibility.
    """
    if path_a.start != path_b.start or path_a.end != path_b.end:
        raise ValueError("paths must share both endpoints")
    a = integrate(cs, start, path_a, tol)
    b = integrate(cs, start, path_b, tol)
    gap = max(abs(x - y) for x, y in zip(a.end.phase, b.end.phase))
    threshold = max(PATH_GAP_FLOOR, 100 * tol)
    return PathIndependenceReport(gap, gap <= threshold, a.end, b.end,
                                  a.endpoint_error_estimate + b.endpoint_error_estimate)


def random_path_pair(rng: random.Random, box=((0.15, 0.4), (0.55, 0.85))) -> tuple[BasePath, BasePath]:
    """Two paths inside a singularity-free rectangle: an L and a random staircase."""
    (tlo, thi), (slo, shi) = box
    ta, tb = sorted(rng.uniform(tlo, thi) for _ in range(2))
    sa, sb = sorted(rng.uniform(slo, shi) for _ in range(2))
    if rng.random() < 0.5:
        ta, tb = tb, ta
    if rng.random() < 0.5:
        sa, sb = sb, sa
    tm, sm = rng.uniform(min(ta, tb), max(ta, tb)), rng.uniform(min(sa, sb), max(sa, sb))
    path_a = BasePath.of((ta, sa), (tb, sa), (tb, sb))
    path_b = BasePath.of((ta, sa), (ta, sm), (tm, sm), (tm, sb), (tb, sb))
    return path_a, path_b


def fornberg_weights(x0: float, xs: Sequence[float], order: int = 1) -> np.ndarray:
    """Finite-difference weights for the ``order``-th derivative at ``x0`` on nodes ``xs``."""
    n = len(xs)
    c = np.zeros((n, order + 1))
    c1, c4 = 1.0, xs[0] - x0
    c[0, 0] = 1.0
    for i in range(1, n):
        mn = min(i, order)
        c2, c5, c4 = 1.0, c4, xs[i] - x0
        for j in range(i):
            c3 = xs[i] - xs[j]
            c2 *= c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    c[i, k] = c1 * (k * c[i - 1, k - 1] - c5 * c[i - 1, k]) / c2
                c[i, 0] = -c1 * c5 * c[i - 1, 0] / c2
            for k in range(mn, 0, -1):
                c[j, k] = (c4 * c[j, k] - k * c[j, k - 1]) / c3
            c[j, 0] = c4 * c[j, 0] / c3
        c1 = c2
    return c[:, order]


def _segment_runs(traj: Trajectory) -> list[list[int]]:
    """Sample indices per path segment, each run including the segment's start sample."""
    runs: dict[int, list[int]] = {}
    for i, smp in enumerate(traj.samples[1:], start=1):
        run = runs.setdefault(smp.segment, [i - 1])
        run.append(i)
    return list(runs.values())


def numeric_symmetry_residual(g: BirationalMap, traj: Trajectory, sys: GarnierSystem,
                              params: Sequence, stencil: int = 7, guard: float = DEFAULT_GUARD) -> float:
    """Max deviation between the differentiated image of ``traj`` and the primed fields.

    ``sys`` must have symbolic parameters; ``params`` are the values ``traj``
    was integrated with.
    """
    fn, new_params = compile_map(g, params)
    primed = compile_system(sys, new_params, guard)
    images = []
    for smp in traj.samples:
        try:
            images.append(fn(*smp.y, smp.t, smp.s))
        except ZeroDivisionError:
            raise PoleError(f"{g.name} has a pole at trajectory sample tau={smp.tau}") from None
    worst = 0.0
    for run in _segment_runs(traj):
        if len(run) < stencil:
            continue
        taus = [traj.samples[i].tau for i in run]
        for pos, i in enumerate(run):
            lo = min(max(0, pos - stencil // 2), len(run) - stencil)
            window = list(range(lo, lo + stencil))
            w = fornberg_weights(taus[pos], [taus[j] for j in window])
            deriv = [sum(wk * images[run[j]][c] for wk, j in zip(w, window)) for c in range(6)]
            y_img = images[i]
            ft, fs = primed.fields(y_img)
            for c in range(4):
                expected = deriv[4] * ft[c] + deriv[5] * fs[c]
                worst = max(worst, abs(deriv[c] - expected))
    return worst


def corrupted_system(sys: GarnierSystem) -> GarnierSystem:
    """Negative control: add q1*s to the second Hamiltonian."""
    from ..exactalg import Expression, Q1, S

    return GarnierSystem.from_hamiltonians(sys.h1, sys.h2 + Expression.var(Q1) * Expression.var(S), "corrupted")


@dataclass(frozen=True)
class TwoRouteReport:
    gap: float
    direct: NumericPoint
    via_transform: NumericPoint


def two_route_consistency(original: GarnierSystem, transformed: GarnierSystem, change: BirationalMap,
                          params: Sequence, start: NumericPoint, path: BasePath,
                          tol: float = DEFAULT_TOL) -> TwoRouteReport:
    """Integrate directly and through the coordinate change ``change``, then compare."""
    direct = integrate(compile_system(original, params), start, path, tol).end
    fwd, _ = compile_map(change, params)
    back, _ = compile_map(inverse(change), params)
    img = fwd(*start.as_tuple())
    mapped_start = NumericPoint.from_parts(img[:4], start.t, start.s)
    end_t = integrate(compile_system(transformed, params), mapped_start, path, tol).end
    pulled = back(*end_t.as_tuple())
    via = NumericPoint.from_parts(pulled[:4], end_t.t, end_t.s)
    gap = max(abs(a - b) for a, b in zip(direct.phase, via.phase))
    return TwoRouteReport(gap, direct, via)


@dataclass(frozen=True)
class OrderReport:
    slope: float
    step_sizes: tuple[float, ...]
    errors: tuple[float, ...]


def order_of_accuracy(cs, start: NumericPoint, path: BasePath, steps: Sequence[int] = (4, 8, 16, 32),
                      reference_steps: int = 1024) -> OrderReport:
    """Fit log(endpoint error) against log(step) in fixed-step mode."""
    ref = integrate(cs, start, path, fixed_steps=reference_steps).end.phase
    hs, errs = [], []
    for n in steps:
        end = integrate(cs, start, path, fixed_steps=n).end.phase
        hs.append(path.length / n)
        errs.append(max(abs(a - b) for a, b in zip(end, ref)))
    slope = float(np.polyfit(np.log(hs), np.log(errs), 1)[0])
    return OrderReport(slope, tuple(hs), tuple(errs))


def exact_start(point: NumericPoint) -> tuple[Fraction, ...]:
    return tuple(Fraction(v) for v in point.as_tuple())


def finite(x: float) -> bool:
    return math.isfinite(x)
