"""Approach matrix runner and CSV reports (coverage, time overhead, dispersion ratios)."""
from __future__ import annotations

import csv
import io
import math
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from statistics import fmean

from . import oracle
from .compiler import BoundUnverified, CompileError, DecodeMismatch, compile_task, decode
from .metrics import MetricReport
from .search import astar
from .taskio import ParseError, read_task

SCHEMA = "bench-v1"
APPROACHES = ("Pi", "count_cd", "count_dc", "delta_cd", "delta_dc", "range_cd", "range_dc", "P(Pi)-oracle")
DC_APPROACHES = ("count_dc", "delta_dc", "range_dc")
HEATMAP_METRICS = ("count", "delta", "range", "stddev")


@dataclass
class BenchRecord:
    instance: str
    approach: str
    outcome: str
    wall_time: float
    cost: int | None = None
    count: int | None = None
    delta: int | None = None
    range: int | None = None
    stddev: float | None = None
    expansions: int | None = None
    schema: str = SCHEMA


HEADER = [f.name for f in fields(BenchRecord)]


def _with_metrics(rec: BenchRecord, costs) -> BenchRecord:
    m = MetricReport.of(costs)
    rec.cost, rec.count, rec.delta, rec.range, rec.stddev = m.cost, m.count, m.delta, m.range, m.stddev
    return rec


def run_approach(instance: str, task, approach: str, budget: float | None = None,
                 heuristic: str = "hmax") -> BenchRecord:
    t0 = time.perf_counter()
    if isinstance(task, Exception):
        return BenchRecord(instance, approach, f"error: {type(task).__name__}", 0.0)
    try:
        if approach == "Pi":
            res = astar(task, heuristic, max_seconds=budget)
            rec = BenchRecord(instance, approach, res.outcome.value, 0.0, expansions=res.stats.expanded)
            if res.solved:
                _with_metrics(rec, res.plan.cost_vector(task))
        elif approach == "P(Pi)-oracle":
            plans = oracle.all_cost_optimal(task)
            rec = BenchRecord(instance, approach, "solved" if plans else "unsolvable", 0.0)
            if plans:
                # best value of each metric over the cost-optimal set
                reports = [MetricReport.of(p.cost_vector(task)) for p in plans]
                rec.cost = reports[0].cost
                rec.count = min(r.count for r in reports)
                rec.delta = min(r.delta for r in reports)
                rec.range = min(r.range for r in reports)
                rec.stddev = min(r.stddev for r in reports)
        else:
            metric, order = approach.split("_")
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", BoundUnverified)
                compiled = compile_task(task, metric, order, delta_mode="strict")
            res = astar(compiled.task, heuristic, max_seconds=budget)
            rec = BenchRecord(instance, approach, res.outcome.value, 0.0, expansions=res.stats.expanded)
            if res.solved:
                decoded = decode(res.plan, compiled)
                _with_metrics(rec, decoded.plan.cost_vector(task))
    except oracle.Incomplete:
        rec = BenchRecord(instance, approach, "resource-limit", 0.0)
    except (CompileError, DecodeMismatch) as e:
        rec = BenchRecord(instance, approach, f"error: {type(e).__name__}", 0.0)
    rec.wall_time = time.perf_counter() - t0
    return rec


def _run_instance(args):
    instance, task, approaches, budget, heuristic = args
    return [run_approach(instance, task, a, budget, heuristic) for a in approaches]


def run_bench(instances, approaches=APPROACHES, budget=None, heuristic="hmax", jobs=1) -> list[BenchRecord]:
    """``instances`` is a list of (id, Task); one record per (instance, approach)."""
    work = [(name, task, tuple(approaches), budget, heuristic) for name, task in instances]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(_run_instance, work))
    else:
        chunks = [_run_instance(w) for w in work]
    return [r for chunk in chunks for r in chunk]


def load_instances(directory) -> list[tuple[str, object]]:
    out = []
    for path in sorted(Path(directory).glob("*.task.json")):
        name = path.name[: -len(".task.json")]
        try:
            out.append((name, read_task(path)))
        except (OSError, ParseError) as e:
            out.append((name, e))
    return out


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return "inf" if math.isinf(v) else f"{v:.4f}"
    return str(v)


def records_csv(records) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(HEADER)
    for r in records:
        d = asdict(r)
        d["wall_time"] = f"{r.wall_time:.6f}"
        w.writerow([_fmt(d[h]) for h in HEADER])
    return buf.getvalue()


def parse_records(text: str) -> list[BenchRecord]:
    out = []
    for row in csv.DictReader(io.StringIO(text)):
        kw = {}
        for f in fields(BenchRecord):
            v = row[f.name]
            if f.name in ("instance", "approach", "outcome", "schema"):
                kw[f.name] = v
            elif v == "":
                kw[f.name] = None
            elif f.name in ("wall_time", "stddev"):
                kw[f.name] = float(v)
            else:
                kw[f.name] = int(v)
        out.append(BenchRecord(**kw))
    return out


def ratio(x: float, best: float) -> float:
    """Dispersion suboptimality ratio; 0/0 counts as optimal."""
    if best == 0:
        return 1.0 if x == 0 else math.inf
    return x / best


def summarize(records) -> list[dict]:
    """Derived rows: coverage, time overhead T(X)/T(Pi), dispersion suboptimality
    of Pi against each dispersion-first plan, and the metric-cross heatmap."""
    by = {(r.instance, r.approach): r for r in records}
    instances = sorted({r.instance for r in records})
    approaches = [a for a in APPROACHES if any(r.approach == a for r in records)]
    solved = {k: r for k, r in by.items() if r.outcome == "solved"}
    rows = []
    for a in approaches:
        n = sum(1 for i in instances if (i, a) in solved)
        rows.append({"kind": "coverage", "instance": "", "approach": a, "metric": "", "value": n})
    for i in instances:
        base = solved.get((i, "Pi"))
        for a in approaches:
            if a == "Pi" or base is None or (i, a) not in solved:
                continue
            t = solved[(i, a)].wall_time
            rows.append({"kind": "overhead", "instance": i, "approach": a, "metric": "",
                         "value": t / base.wall_time if base.wall_time > 0 else math.inf})
    for i in instances:
        base = solved.get((i, "Pi"))
        for metric in ("count", "delta", "range"):
            ref = solved.get((i, f"{metric}_dc"))
            if base is None or ref is None:
                continue
            rows.append({"kind": "subopt", "instance": i, "approach": "Pi", "metric": metric,
                         "value": ratio(getattr(base, metric), getattr(ref, metric))})
    common = [i for i in instances if all((i, a) in solved for a in DC_APPROACHES)]
    for a in DC_APPROACHES:
        if not any(r.approach == a for r in records):
            continue
        for metric in HEATMAP_METRICS:
            vals = []
            for i in common:
                x = getattr(solved[(i, a)], metric)
                if metric == "stddev":
                    best = min(solved[(i, b)].stddev for b in DC_APPROACHES)
                else:
                    best = getattr(solved[(i, f"{metric}_dc")], metric)
                vals.append(ratio(x, best))
            if vals:
                rows.append({"kind": "heatmap", "instance": "", "approach": a, "metric": metric,
                             "value": fmean(vals) if all(math.isfinite(v) for v in vals) else math.inf})
    return rows


SUMMARY_HEADER = ["kind", "instance", "approach", "metric", "value"]


def summary_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SUMMARY_HEADER)
    for r in rows:
        w.writerow([r["kind"], r["instance"], r["approach"], r["metric"], _fmt(r["value"])])
    return buf.getvalue()
