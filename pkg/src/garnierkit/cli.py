"""Command-line front end: ``verify``, ``transform``, ``integrate``, ``catalog``.

Exit codes:
    0  success (for ``verify``: the whole suite passed)
    1  verification suite failed
    2  usage error
    3  parse error
    4  pole error (point on a pole of the map)
    5  integration aborted at a singularity
    6  integration exceeded the step budget
    7  internal error
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from .exactalg import VARIABLES, ParseError, PoleError, parse_expr, parse_rational, to_text
from .maps import UnknownMapError, apply_point, catalog_get, provenance_table, pullback

EXIT_OK = 0
EXIT_SUITE_FAILED = 1
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_POLE = 4
EXIT_SINGULARITY = 5
EXIT_MAX_STEPS = 6
EXIT_INTERNAL = 7

IMAGE_LABELS = ("Q1", "P1", "Q2", "P2", "t", "s")
PARAM_NAMES = VARIABLES[6:]


class UsageError(Exception):
    pass


def parse_assignment(text: str, names, exact: bool = True) -> dict[str, Fraction | float]:
    """Parse ``a=1/2,b=-3`` into a dict; every name in ``names`` must appear exactly once."""
    values: dict[str, Fraction | float] = {}
    offset = 0
    for chunk in text.split(","):
        key, eq, raw = chunk.partition("=")
        key = key.strip()
        if not eq:
            raise ParseError("expected name=value", text, offset)
        if key not in names:
            raise ParseError(f"unknown name {key!r}", text, offset + chunk.index(key) if key else offset)
        if key in values:
            raise ParseError(f"duplicate name {key!r}", text, offset)
        vpos = offset + len(key) + 1
        if exact:
            try:
                values[key] = parse_rational(raw)
            except ParseError:
                raise ParseError("expected an exact rational like 3 or -7/2", text, vpos) from None
        else:
            try:
                values[key] = float(Fraction(raw.strip()))
            except (ValueError, ZeroDivisionError):
                raise ParseError("expected a number", text, vpos) from None
        offset += len(chunk) + 1
    missing = [n for n in names if n not in values]
    if missing:
        raise UsageError(f"missing values for: {', '.join(missing)}")
    return values


def parse_waypoints(text: str) -> list[tuple[float, float]]:
    """``0.2,0.6;0.3,0.7`` -> [(0.2, 0.6), (0.3, 0.7)]."""
    out = []
    offset = 0
    for chunk in text.split(";"):
        parts = chunk.split(",")
        if len(parts) != 2:
            raise ParseError("waypoint needs exactly two numbers t,s", text, offset)
        try:
            out.append((float(Fraction(parts[0].strip())), float(Fraction(parts[1].strip()))))
        except (ValueError, ZeroDivisionError):
            raise ParseError("expected a number", text, offset) from None
        offset += len(chunk) + 1
    return out


def format_point(image, params_before, params_after) -> str:
    line = " ".join(f"{label}={v}" for label, v in zip(IMAGE_LABELS, image))
    if tuple(params_before) != tuple(params_after):
        line += "\n" + " ".join(f"{n}={v}" for n, v in zip(PARAM_NAMES, params_after))
    return line


# commands ----------------------------------------------------------------------


def cmd_verify(args) -> int:
    from .suite import CHECKS, run_suite

    checks = CHECKS if args.checks in (None, [], ["all"]) else tuple(args.checks)
    bad = [c for c in checks if c not in CHECKS]
    if bad:
        raise UsageError(f"unknown check(s): {', '.join(bad)}; choose from {', '.join(CHECKS)} or all")
    if args.trials < 1:
        raise UsageError("--trials must be positive")
    report = run_suite(checks, mode=args.mode, trials=args.trials, seed=args.seed,
                       workers=args.workers, full_group=args.full_group)
    text = report.to_json()
    if args.out and args.out != "-":
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    for rec in report.checks:
        print(f"{rec.status:24s} {rec.name:14s} {rec.target}", file=sys.stderr)
    s = report.summary
    print(f"{s['passed']}/{s['total']} passed, {s['failed']} failed", file=sys.stderr)
    if any(r.status == "error" for r in report.checks):
        return EXIT_INTERNAL
    return EXIT_OK if report.passed else EXIT_SUITE_FAILED


def cmd_transform(args) -> int:
    g = catalog_get(args.map)
    if args.expr is not None:
        print(to_text(pullback(g, parse_expr(args.expr))))
        return EXIT_OK
    values = parse_assignment(args.point, VARIABLES)
    x = [values[n] for n in VARIABLES[:6]]
    params = [values[n] for n in PARAM_NAMES]
    image, new_params = apply_point(g, x, params)
    print(format_point(image, params, new_params))
    return EXIT_OK


def cmd_integrate(args) -> int:
    from .flow import BasePath, NumericPoint, compile_system, integrate, write_csv
    from .garnier import build_system
    from .maps import transformed_system

    if not args.tol > 0:
        raise UsageError("--tol must be positive")
    p = parse_assignment(args.params, PARAM_NAMES, exact=False)
    st = parse_assignment(args.start, VARIABLES[:6], exact=False)
    start = NumericPoint(*(st[n] for n in VARIABLES[:6]))
    waypoints = parse_waypoints(args.path)
    if waypoints[0] != (start.t, start.s):
        waypoints.insert(0, (start.t, start.s))
    try:
        path = BasePath(tuple(waypoints))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    system = build_system() if args.system == "original" else transformed_system()
    cs = compile_system(system, [p[n] for n in PARAM_NAMES])
    traj = integrate(cs, start, path, args.tol, max_steps=args.max_steps)
    if args.out and args.out != "-":
        write_csv(traj, args.out)
    else:
        traj.write_csv(sys.stdout)
    end = traj.end
    print(f"end t={end.t:.17g} s={end.s:.17g} q1={end.q1:.17g} p1={end.p1:.17g} "
          f"q2={end.q2:.17g} p2={end.p2:.17g} steps={len(traj.samples) - 1} "
          f"err_est={traj.endpoint_error_estimate:.3g}", file=sys.stderr)
    return EXIT_OK


def cmd_catalog(args) -> int:
    print(provenance_table())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    from .suite import CHECKS

    parser = argparse.ArgumentParser(prog="garnierkit", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run the verification suite and write a JSON report")
    v.add_argument("checks", nargs="*", metavar="CHECK", help=f"any of: {', '.join(CHECKS)}, all (default)")
    v.add_argument("--mode", choices=("exact", "probabilistic"), default="exact")
    v.add_argument("--trials", type=int, default=20)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--out", default="-", help="report path, '-' for stdout")
    v.add_argument("--workers", type=int, default=None, help="worker processes (default: CPU count)")
    v.add_argument("--full-group", action="store_true", help="also materialize the full group of maps")
    v.set_defaults(func=cmd_verify)

    t = sub.add_parser("transform", help="apply a catalog map to a point or pull back an expression")
    t.add_argument("--map", required=True, help="catalog name, see the catalog command")
    what = t.add_mutually_exclusive_group(required=True)
    what.add_argument("--point", help="assignment of all 11 variables, e.g. q1=3,p1=2,...,th2=1")
    what.add_argument("--expr", help="rational expression in the 11 variables")
    t.set_defaults(func=cmd_transform)

    i = sub.add_parser("integrate", help="integrate the flow along a piecewise-linear base path")
    i.add_argument("--params", required=True, help="k0=..,k1=..,kinf=..,th1=..,th2=..")
    i.add_argument("--start", required=True, help="q1=..,p1=..,q2=..,p2=..,t=..,s=..")
    i.add_argument("--path", required=True, help="waypoints 't,s;t,s;...'")
    i.add_argument("--tol", type=float, default=1e-10)
    i.add_argument("--max-steps", type=int, default=200000)
    i.add_argument("--system", choices=("original", "transformed"), default="original")
    i.add_argument("--out", default="-", help="CSV path, '-' for stdout")
    i.set_defaults(func=cmd_integrate)

    c = sub.add_parser("catalog", help="list catalog maps")
    c.set_defaults(func=cmd_catalog)
    return parser


def main(argv=None) -> int:
    from .flow import MaxStepsExceeded, SingularityAbort

    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except UnknownMapError as exc:
        print(f"usage error: {exc.args[0]}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except PoleError as exc:
        print(f"pole error: {exc}", file=sys.stderr)
        return EXIT_POLE
    except SingularityAbort as exc:
        print(f"singularity abort at tau={exc.tau:.6g}: {exc}", file=sys.stderr)
        return EXIT_SINGULARITY
    except MaxStepsExceeded as exc:
        print(f"max steps exceeded at tau={exc.tau:.6g}: {exc}", file=sys.stderr)
        return EXIT_MAX_STEPS
    except Exception as exc:
        print(f"internal error: {exc!r}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
