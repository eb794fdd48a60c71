"""Run reports: one JSON object per instance, plus a campaign aggregate."""

from __future__ import annotations

import hashlib
import json
import os
import random
import time
from concurrent.futures import ProcessPoolExecutor

from .instance_io import generate_instance, serialize_instance
from .verify import run_pipeline, verify_pipeline

REPORT_VERSION = 1
WORKERS_ENV = "HT6_WORKERS"

RATIO_CHECKS = ("ratio_theta6_vis", "ratio_g9_vis", "ratio_g6_vis")


def instance_digest(inst) -> str:
    return "sha256:" + hashlib.sha256(serialize_instance(inst).encode()).hexdigest()


def _graph_summary(inst, g, slack=None) -> dict:
    out = {"edges": len(g), "max_degree": g.max_degree()}
    if slack is not None:
        out["min_degree_margin"] = min((inst.c(v) + slack - g.degree(v) for v in range(inst.n)),
                                       default=slack)
    return out


def run_report(pipeline, verification, label=None) -> dict:
    inst = pipeline.inst
    rep = verification.as_dict()
    ratios = {}
    for c in verification.checks:
        if c.name in RATIO_CHECKS:
            r = c.measured["max_ratio"]
            ratios[c.name] = "inf" if r == float("inf") else r
    seconds = dict(pipeline.seconds)
    seconds["verify"] = sum(c.seconds for c in verification.checks)
    return {
        "type": "instance",
        "report_version": REPORT_VERSION,
        "label": label,
        "digest": instance_digest(inst),
        "n": inst.n,
        "constraints": len(inst.constraints),
        "max_c": max((inst.c(v) for v in range(inst.n)), default=0),
        "graphs": {
            "vis": _graph_summary(inst, pipeline.vis),
            "theta6": _graph_summary(inst, pipeline.ht.graph),
            "g9": _graph_summary(inst, pipeline.g9, 9),
            "g6": _graph_summary(inst, pipeline.g6, 6),
        },
        "transformations": {"steps": len(pipeline.red.steps),
                            "type2": sum(1 for s in pipeline.red.steps if s.removed_type2),
                            "charge2_configs": len(pipeline.red.configs)},
        "ratios": ratios,
        "ok": rep["ok"],
        "checks": rep["checks"],
        "seconds": {k: round(v, 6) for k, v in seconds.items()},
    }


def campaign_params(seed: int, n_min: int = 3, n_max: int = 60) -> tuple:
    """(n, constraint budget) drawn from the seed; the budget is at most n."""
    r = random.Random(seed)
    n = r.randint(n_min, n_max)
    return n, r.randint(0, n)


def campaign_instance(seed: int, n_min: int = 3, n_max: int = 60, bbox=(1000, 1000)):
    n, budget = campaign_params(seed, n_min, n_max)
    return generate_instance(seed, n, budget, bbox=bbox)


def _campaign_job(args) -> dict:
    seed, n_min, n_max, confined = args
    inst = campaign_instance(seed, n_min, n_max)
    try:
        p = run_pipeline(inst)
        rec = run_report(p, verify_pipeline(p, confined=confined), label=f"seed={seed}")
    except Exception as exc:  # report it, keep the campaign going
        rec = {"type": "instance", "report_version": REPORT_VERSION, "label": f"seed={seed}",
               "digest": instance_digest(inst), "n": inst.n, "ok": False,
               "error": f"{type(exc).__name__}: {exc}"}
    rec["seed"] = seed
    return rec


def worker_count(requested=None) -> int:
    if requested:
        return max(1, int(requested))
    env = os.environ.get(WORKERS_ENV)
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def run_campaign(seeds, n_min=3, n_max=60, confined=True, workers=None):
    """Yield instance records in seed order, then one aggregate record."""
    t0 = time.perf_counter()
    jobs = [(s, n_min, n_max, confined) for s in seeds]
    workers = worker_count(workers)
    agg = {"type": "aggregate", "report_version": REPORT_VERSION, "instances": 0,
           "failures": 0, "failed_checks": {}, "errors": 0,
           "max_ratio": {k: 0.0 for k in RATIO_CHECKS}, "transformation_steps": 0, "type2": 0}

    def consume(rec):
        agg["instances"] += 1
        if not rec["ok"]:
            agg["failures"] += 1
        if "error" in rec:
            agg["errors"] += 1
            return
        for c in rec["checks"]:
            if not c["passed"]:
                agg["failed_checks"][c["name"]] = agg["failed_checks"].get(c["name"], 0) + 1
        for k, v in rec["ratios"].items():
            v = float(v)
            agg["max_ratio"][k] = max(agg["max_ratio"][k], v)
        agg["transformation_steps"] += rec["transformations"]["steps"]
        agg["type2"] += rec["transformations"]["type2"]

    if workers == 1 or len(jobs) <= 1:
        results = map(_campaign_job, jobs)
        for rec in results:
            consume(rec)
            yield rec
    else:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            for rec in ex.map(_campaign_job, jobs, chunksize=4):
                consume(rec)
                yield rec
    agg["ok"] = agg["failures"] == 0
    agg["seconds"] = round(time.perf_counter() - t0, 3)
    agg["workers"] = workers
    yield agg


def dumps(rec: dict) -> str:
    return json.dumps(rec, sort_keys=True, separators=(",", ":"))
