"""Verification suite: runs the symbolic checks and assembles a JSON report."""

from __future__ import annotations

import json
import os
import time
import traceback
from concurrent.futures import ProcessPoolExecutor
from concurrent.futures.process import BrokenProcessPool
from dataclasses import asdict, dataclass, field

from .garnier import build_system, check_compatibility
from .maps.birational import check_symplectic, verify_inverse
from .maps.catalog import BACKLUND_NAMES, CHART_NAMES, CONJUGATE_NAMES, SIGMA_NAMES, catalog_get
from .maps.group import map_order, materialize_group, parameter_group_order, relation_orders
from .maps.verify import (
    check_polynomiality, check_symmetry, polynomial_in_chart, transformed_system, verify_eq6,
    verify_time_correction,
)

REPORT_VERSION = 1
CHECKS = ("symmetry", "symplectic", "inverse", "polynomial", "charts", "eq6", "group", "relations",
          "compatibility", "negative")
MEMORY_ENV = "GARNIERKIT_MAX_MEMORY_MB"

PASS, FAIL, EXPECTED_FAIL, ERROR = "pass", "fail", "expected-fail-confirmed", "error"


@dataclass
class CheckRecord:
    name: str
    target: str
    status: str
    details: dict = field(default_factory=dict)
    witness: dict | None = None
    millis: float = 0.0
    mode: str = "exact"

    def to_dict(self) -> dict:
        d = asdict(self)
        if d["witness"] is None:
            del d["witness"]
        return d


@dataclass
class VerificationReport:
    version: int
    seed: int
    mode: str
    checks: list[CheckRecord]
    summary: dict

    @property
    def passed(self) -> bool:
        return self.summary["failed"] == 0

    def to_dict(self) -> dict:
        return {"version": self.version, "seed": self.seed, "mode": self.mode,
                "checks": [c.to_dict() for c in self.checks], "summary": self.summary}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=False)

    @classmethod
    def from_json(cls, text: str) -> VerificationReport:
        d = json.loads(text)
        checks = [CheckRecord(**c) for c in d["checks"]]
        return cls(d["version"], d["seed"], d["mode"], checks, d["summary"])


def summarize(records: list[CheckRecord]) -> dict:
    passed = sum(r.status in (PASS, EXPECTED_FAIL) for r in records)
    return {"total": len(records), "passed": passed, "failed": len(records) - passed}


def _jsonable_witness(w: dict | None) -> dict | None:
    if w is None:
        return None
    out = dict(w)
    out["point"] = {k: str(v) for k, v in w["point"].items()}
    out["value"] = str(w["value"])
    return out


def _status(ok: bool) -> str:
    return PASS if ok else FAIL


# each task: (check, target) -> list of records ------------------------------------


def _task_symmetry(target, mode, trials, seed):
    rep = check_symmetry(catalog_get(target), build_system(), mode=mode, trials=trials, seed=seed)
    details = {"residuals_zero": {f"{c}/{d}": ok for (c, d), ok in rep.residual_ok.items()}}
    if mode == "probabilistic":
        details["error_bound"] = rep.error_bound
    return [CheckRecord("symmetry", target, _status(rep.passed), details, _jsonable_witness(rep.witness))]


def _task_symplectic(target, mode, trials, seed):
    return [CheckRecord("symplectic", target, _status(check_symplectic(catalog_get(target), mode)))]


def _task_inverse(target, mode, trials, seed):
    return [CheckRecord("inverse", target, _status(verify_inverse(catalog_get(target), mode)))]


def _task_polynomial(target, mode, trials, seed):
    original = check_polynomiality(build_system())
    after = check_polynomiality(transformed_system())
    return [
        CheckRecord("polynomial", "garnier", _status(not original),
                    {"polynomial_in_phase": original, "expected": False}),
        CheckRecord("polynomial", "garnier|phi1", _status(after), {"polynomial_in_phase": after}),
    ]


def _task_charts(target, mode, trials, seed):
    g = catalog_get(target)
    parts = {
        "symplectic": check_symplectic(g, mode),
        "inverse": verify_inverse(g, mode),
        "time_correction": verify_time_correction(g, mode),
        "polynomial": polynomial_in_chart(target),
    }
    return [CheckRecord("charts", target, _status(all(parts.values())), parts)]


def _task_eq6(target, mode, trials, seed):
    res = verify_eq6(mode=mode, trials=trials, seed=seed)
    return [
        CheckRecord("eq6", name, _status(r.matches and r.symmetric),
                    {"matches_closed_form": r.matches, "mismatched": r.mismatched, "symmetric": r.symmetric})
        for name, r in res.items()
    ]


def _task_group(target, mode, trials, seed, full=False):
    order = parameter_group_order()
    invol = {n: map_order(catalog_get(n), mode=mode) == 2 for n in SIGMA_NAMES}
    recs = [
        CheckRecord("group", "parameter_group_order", _status(order == 120), {"group_order": order}),
        CheckRecord("group", "generators_involutive", _status(all(invol.values())), {"involution": invol}),
    ]
    if full:
        n = materialize_group()
        recs.append(CheckRecord("group", "full_group_order", _status(n == 120),
                                {"elements": n, "parameter_group_order": order}))
    return recs


def _task_relations(target, mode, trials, seed):
    recs = []
    for e in relation_orders(mode=mode):
        details = {"map_order": e.map_order, "param_order": e.param_order, "cap_exceeded": e.cap_exceeded}
        recs.append(CheckRecord("relations", "*".join(e.word), _status(e.consistent), details))
    return recs


def _task_compatibility(target, mode, trials, seed):
    rep = check_compatibility(build_system(), mode=mode)
    return [CheckRecord("compatibility", "garnier", _status(rep.sign in ("+", "-")),
                        {"sign": rep.sign, "residual_is_base_function": rep.residual_is_base_function,
                         "residual_plus_is_zero": rep.residual_plus.is_zero()})]


def _task_negative(target, mode, trials, seed):
    rep = check_symmetry(catalog_get("S0"), transformed_system(), mode=mode, trials=trials, seed=seed)
    status = FAIL if rep.passed else EXPECTED_FAIL
    details = {"failing_residuals": [f"{c}/{d}" for c, d in rep.failing()], "has_witness": rep.witness is not None}
    if not rep.passed and rep.witness is None:
        status = FAIL
    return [CheckRecord("negative", "S0", status, details, _jsonable_witness(rep.witness))]


_TASKS = {
    "symmetry": (_task_symmetry, BACKLUND_NAMES),
    "symplectic": (_task_symplectic, BACKLUND_NAMES + ("phi1",) + CHART_NAMES + CONJUGATE_NAMES),
    "inverse": (_task_inverse, BACKLUND_NAMES + ("phi1", "S0") + CHART_NAMES + CONJUGATE_NAMES),
    "polynomial": (_task_polynomial, ("phi1",)),
    "charts": (_task_charts, CHART_NAMES),
    "eq6": (_task_eq6, ("phi1",)),
    "group": (_task_group, ("sigma",)),
    "relations": (_task_relations, ("sigma",)),
    "compatibility": (_task_compatibility, ("garnier",)),
    "negative": (_task_negative, ("S0",)),
}


def _worker_init():
    cap = os.environ.get(MEMORY_ENV)
    if cap:
        import resource

        limit = int(cap) * 1024 * 1024
        resource.setrlimit(resource.RLIMIT_AS, (limit, limit))


def _run_task(check, target, mode, trials, seed, full_group=False):
    fn = _TASKS[check][0]
    start = time.perf_counter()
    try:
        recs = fn(target, mode, trials, seed, full=full_group) if check == "group" else fn(target, mode, trials, seed)
    except MemoryError:
        recs = [CheckRecord(check, target, ERROR, {"error": f"memory cap exceeded ({MEMORY_ENV})"})]
    except Exception as exc:  # a broken check must not sink the suite
        recs = [CheckRecord(check, target, ERROR, {"error": repr(exc), "trace": traceback.format_exc(limit=3)})]
    millis = (time.perf_counter() - start) * 1000 / max(len(recs), 1)
    for r in recs:
        r.millis = round(millis, 3)
        r.mode = mode
    return recs


def _crashed(check, target, mode):
    detail = "worker process died"
    if os.environ.get(MEMORY_ENV):
        detail += f" (likely the {MEMORY_ENV} cap)"
    return [CheckRecord(check, target, ERROR, {"error": detail}, mode=mode)]


def _run_pooled(tasks, workers, mode, trials, seed, full_group):
    results: list = [None] * len(tasks)
    try:
        with ProcessPoolExecutor(max_workers=workers, initializer=_worker_init) as pool:
            futs = [pool.submit(_run_task, c, t, mode, trials, seed, full_group) for c, t in tasks]
            for i, f in enumerate(futs):
                try:
                    results[i] = f.result()
                except BrokenProcessPool:
                    pass
    except BrokenProcessPool:
        pass
    # a dead worker takes the pool down; rerun what is left one task per process
    for i, (c, t) in enumerate(tasks):
        if results[i] is not None:
            continue
        try:
            with ProcessPoolExecutor(max_workers=1, initializer=_worker_init) as pool:
                results[i] = pool.submit(_run_task, c, t, mode, trials, seed, full_group).result()
        except BrokenProcessPool:
            results[i] = _crashed(c, t, mode)
    return results


def run_suite(checks=CHECKS, mode: str = "exact", trials: int = 20, seed: int = 0,
              workers: int | None = None, full_group: bool = False) -> VerificationReport:
    unknown = [c for c in checks if c not in _TASKS]
    if unknown:
        raise ValueError(f"unknown checks: {', '.join(unknown)}")
    if mode not in ("exact", "probabilistic"):
        raise ValueError(f"unknown mode {mode!r}")
    tasks = [(c, target) for c in checks for target in _TASKS[c][1]]
    workers = workers or os.cpu_count() or 1
    if workers == 1 or len(tasks) == 1:
        results = [_run_task(c, t, mode, trials, seed, full_group) for c, t in tasks]
    else:
        results = _run_pooled(tasks, workers, mode, trials, seed, full_group)
    records = [r for recs in results for r in recs]
    return VerificationReport(REPORT_VERSION, seed, mode, records, summarize(records))
