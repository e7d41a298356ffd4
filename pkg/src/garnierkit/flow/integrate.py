"""Dormand-Prince 5(4) integration of the Pfaffian system along base paths."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Sequence, TextIO

from .compiled import CompiledSystem, SingularityError

DEFAULT_TOL = 1e-10
DEFAULT_MAX_STEPS = 200_000
DEFAULT_MAX_REJECTS = 60
DEFAULT_MIN_STEP = 1e-9

# Dormand & Prince (1980) tableau
_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_B5 = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0)
_B4 = (5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40)
_E = tuple(b5 - b4 for b5, b4 in zip(_B5, _B4))


class IntegrationError(RuntimeError):
    pass


class SingularityAbort(IntegrationError):
    def __init__(self, message: str, last_point: NumericPoint, tau: float):
        super().__init__(message)
        self.last_point = last_point
        self.tau = tau


class MaxStepsExceeded(IntegrationError):
    def __init__(self, message: str, last_point: NumericPoint, tau: float):
        super().__init__(message)
        self.last_point = last_point
        self.tau = tau


@dataclass(frozen=True)
class NumericPoint:
    q1: float
    p1: float
    q2: float
    p2: float
    t: float
    s: float

    def __post_init__(self):
        if not all(math.isfinite(v) for v in self.as_tuple()):
            raise ValueError(f"non-finite coordinate in {self}")

    def as_tuple(self) -> tuple[float, ...]:
        return (self.q1, self.p1, self.q2, self.p2, self.t, self.s)

    @property
    def phase(self) -> tuple[float, ...]:
        return (self.q1, self.p1, self.q2, self.p2)

    @classmethod
    def from_parts(cls, phase: Sequence[float], t: float, s: float) -> NumericPoint:
        return cls(*(float(v) for v in phase), float(t), float(s))


def on_singular_locus(t: float, s: float, eps: float = 0.0) -> bool:
    return min(abs(t), abs(t - 1), abs(s), abs(s - 1), abs(t - s)) <= eps


@dataclass(frozen=True)
class BasePath:
    """Piecewise-linear path through (t, s) waypoints, parametrized by arclength."""

    waypoints: tuple[tuple[float, float], ...]

    def __post_init__(self):
        if not self.waypoints:
            raise ValueError("a path needs at least one waypoint")
        object.__setattr__(self, "waypoints", tuple((float(t), float(s)) for t, s in self.waypoints))
        for t, s in self.waypoints:
            if on_singular_locus(t, s):
                raise ValueError(f"waypoint ({t}, {s}) lies on the singular locus")

    @classmethod
    def of(cls, *points: Sequence[float]) -> BasePath:
        return cls(tuple((p[0], p[1]) for p in points))

    def segments(self):
        for (t0, s0), (t1, s1) in zip(self.waypoints, self.waypoints[1:]):
            length = math.hypot(t1 - t0, s1 - s0)
            if length > 0:
                yield (t0, s0), ((t1 - t0) / length, (s1 - s0) / length), length

    @property
    def length(self) -> float:
        return sum(seg[2] for seg in self.segments())

    @property
    def start(self) -> tuple[float, float]:
        return self.waypoints[0]

    @property
    def end(self) -> tuple[float, float]:
        return self.waypoints[-1]


@dataclass(frozen=True)
class Sample:
    tau: float
    t: float
    s: float
    y: tuple[float, ...]
    h: float
    err_est: float
    segment: int

    @property
    def point(self) -> NumericPoint:
        return NumericPoint.from_parts(self.y, self.t, self.s)


@dataclass
class Trajectory:
    samples: list[Sample] = field(default_factory=list)
    tol: float = DEFAULT_TOL
    rejected: int = 0

    @property
    def end(self) -> NumericPoint:
        return self.samples[-1].point

    @property
    def start(self) -> NumericPoint:
        return self.samples[0].point

    @property
    def endpoint_error_estimate(self) -> float:
        """Sum of the accepted local error estimates."""
        return sum(s.err_est for s in self.samples)

    def write_csv(self, fh: TextIO) -> None:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["tau", "t", "s", "q1", "p1", "q2", "p2", "err_est"])
        for smp in self.samples:
            w.writerow([format(v, ".17g") for v in (smp.tau, smp.t, smp.s, *smp.y, smp.err_est)])


def _rhs(cs: CompiledSystem, y, t, s, dt, ds):
    x = (*y, t, s)
    cs.guard_check(x)
    ft, fs = cs.fields(x, check=False)
    return tuple(dt * a + ds * b for a, b in zip(ft, fs))


def _dp_step(cs, y, t, s, dt, ds, h):
    """One Dormand-Prince step; returns (5th-order y, error vector)."""
    ks = []
    for i in range(7):
        yi = y
        if i:
            yi = tuple(yv + h * sum(a * k[j] for a, k in zip(_A[i], ks)) for j, yv in enumerate(y))
        tau_off = _C[i] * h
        ks.append(_rhs(cs, yi, t + dt * tau_off, s + ds * tau_off, dt, ds))
    y5 = tuple(yv + h * sum(b * k[j] for b, k in zip(_B5, ks) if b) for j, yv in enumerate(y))
    err = tuple(h * sum(e * k[j] for e, k in zip(_E, ks) if e) for j in range(len(y)))
    return y5, err


def _err_norm(err, y_old, y_new) -> float:
    return max(abs(e) / max(1.0, abs(a), abs(b)) for e, a, b in zip(err, y_old, y_new))


def integrate(
    cs: CompiledSystem,
    start: NumericPoint,
    path: BasePath,
    tol: float = DEFAULT_TOL,
    *,
    h0: float | None = None,
    max_step: float | None = None,
    max_steps: int = DEFAULT_MAX_STEPS,
    max_rejects: int = DEFAULT_MAX_REJECTS,
    min_step: float = DEFAULT_MIN_STEP,
    fixed_steps: int | None = None,
) -> Trajectory:
    """Integrate d(phase)/dtau = dt/dtau * field_t + ds/dtau * field_s along ``path``.

    Adaptive mode accepts a step when the scaled local error estimate
    max_i |e_i| / max(1, |y_i|) is at most ``tol``.  ``fixed_steps`` switches
    to that many equal steps per segment with no error control.  A step
    size collapsing below ``min_step`` means a movable singularity of the
    solution and aborts with :class:`SingularityAbort`.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    if (start.t, start.s) != path.start:
        raise ValueError(f"start point base ({start.t}, {start.s}) differs from path start {path.start}")
    y = start.phase
    cs.guard_check(start.as_tuple())
    traj = Trajectory([Sample(0.0, start.t, start.s, y, 0.0, 0.0, -1)], tol)
    tau_total = 0.0
    steps = 0
    for seg_idx, ((t0, s0), (dt, ds), length) in enumerate(path.segments()):
        if fixed_steps is not None:
            h = length / fixed_steps
            for k in range(fixed_steps):
                tau = k * h
                y, err = _dp_step(cs, y, t0 + dt * tau, s0 + ds * tau, dt, ds, h)
                tau = (k + 1) * h if k + 1 < fixed_steps else length
                traj.samples.append(Sample(tau_total + tau, t0 + dt * tau, s0 + ds * tau, y, h,
                                           _err_norm(err, y, y), seg_idx))
            tau_total += length
            continue
        h = h0 or min(length, 1e-2)
        tau = 0.0
        rejects = 0
        while tau < length:
            if steps >= max_steps:
                raise MaxStepsExceeded(f"exceeded {max_steps} steps at tau={tau_total + tau}",
                                       traj.end, tau_total + tau)
            if max_step is not None:
                h = min(h, max_step)
            remaining = length - tau
            last = remaining <= h * (1 + 1e-12)
            if last:
                h = remaining
            elif remaining < 2 * h:
                # avoid a sliver step at the segment end
                h = remaining / 2
            t, s = t0 + dt * tau, s0 + ds * tau
            try:
                y_new, err = _dp_step(cs, y, t, s, dt, ds, h)
                if not all(math.isfinite(v) for v in y_new):
                    raise SingularityError("non-finite state", float("nan"))
                tau_new = length if last else tau + h
                cs.guard_check((*y_new, t0 + dt * tau_new, s0 + ds * tau_new))
            except (SingularityError, OverflowError, ZeroDivisionError) as exc:
                rejects += 1
                traj.rejected += 1
                if rejects > max_rejects:
                    raise SingularityAbort(f"singularity near tau={tau_total + tau}: {exc}",
                                           traj.end, tau_total + tau) from None
                h *= 0.5
                if h < min_step:
                    raise SingularityAbort(f"singularity near tau={tau_total + tau}: {exc}",
                                           traj.end, tau_total + tau) from None
                continue
            en = _err_norm(err, y, y_new)
            if en <= tol:
                steps += 1
                rejects = 0
                tau = tau_new
                y = y_new
                traj.samples.append(Sample(tau_total + tau, t0 + dt * tau, s0 + ds * tau, y, h, en, seg_idx))
                fac = 5.0 if en == 0 else min(5.0, max(0.2, 0.9 * (tol / en) ** 0.2))
            else:
                fac = max(0.1, 0.9 * (tol / en) ** 0.2)
                traj.rejected += 1
            h *= fac
            if h < min_step and length - tau > min_step:
                t, s = t0 + dt * tau, s0 + ds * tau
                where = "fixed singular locus" if on_singular_locus(t, s, 1e-5) else "movable singularity?"
                raise SingularityAbort(f"step size collapsed near tau={tau_total + tau}, (t, s)=({t:.12g}, {s:.12g}) "
                                       f"({where})", traj.end, tau_total + tau)
        tau_total += length
    return traj


def write_csv(traj: Trajectory, path: str) -> None:
    with open(path, "w", newline="") as fh:
        traj.write_csv(fh)
