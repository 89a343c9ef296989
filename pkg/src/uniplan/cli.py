"""Command-line entry point.

Exit codes are stable: 0 ok, 2 unreadable input, 3 weight bound violated,
4 decode mismatch, 5 invalid plan, 10 unsolvable, 11 resource limit.
"""
from __future__ import annotations

import argparse
import json
import sys
import warnings
from pathlib import Path

from . import bench, oracle
from .compiler import (BoundUnverified, BoundViolation, CompileError, DecodeMismatch,
                       compile_task, decode, from_meta, to_meta)
from .domains import FinanceSpec, NavSpec, gen_finance, gen_navigation
from .metrics import METRICS, MetricReport
from .search import HEURISTICS, Outcome, astar
from .task import validate
from .taskio import ParseError, read_plan, read_task, serialize_plan, write_task

EXIT_OK, EXIT_PARSE, EXIT_BOUND, EXIT_DECODE, EXIT_INVALID_PLAN = 0, 2, 3, 4, 5
EXIT_UNSOLVABLE, EXIT_LIMIT = 10, 11


def _err(msg: str) -> None:
    print(f"uniplan: {msg}", file=sys.stderr)


def _meta_path(out: Path) -> Path:
    name = out.name
    for suffix in (".task.json", ".json"):
        if name.endswith(suffix):
            return out.with_name(name[: -len(suffix)] + ".meta.json")
    return out.with_name(name + ".meta.json")


def _load_task(path):
    try:
        return read_task(path)
    except ParseError as e:
        _err(f"{path}: {e}")
    except OSError as e:
        _err(str(e))
    return None


def cmd_compile(args) -> int:
    task = _load_task(args.task)
    if task is None:
        return EXIT_PARSE
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", BoundUnverified)
            compiled = compile_task(task, args.metric, args.order, args.delta_mode)
        for w in caught:
            _err(f"warning: {w.message}")
    except BoundViolation as e:
        _err(str(e))
        return EXIT_BOUND
    except CompileError as e:
        _err(str(e))
        return EXIT_PARSE
    out = Path(args.out)
    meta = Path(args.meta) if args.meta else _meta_path(out)
    write_task(out, compiled.task)
    meta.write_text(json.dumps(to_meta(compiled), indent=2) + "\n", encoding="utf-8")
    s = compiled.scheme
    print(f"|A'| = {len(compiled.task.actions)}")
    print(f"|F'| = {len(compiled.task.props)}")
    print(f"scheme: metric={compiled.metric} order={s.order} W={s.W} omega_d={s.omega_d}"
          + (f" delta_mode={compiled.delta_mode}" if compiled.delta_mode else ""))
    return EXIT_OK


def cmd_solve(args) -> int:
    task = _load_task(args.task)
    if task is None:
        return EXIT_PARSE
    compiled = None
    if args.meta:
        try:
            compiled = from_meta(json.loads(Path(args.meta).read_text(encoding="utf-8")), task)
        except (OSError, ValueError, KeyError) as e:
            _err(f"{args.meta}: {e}")
            return EXIT_PARSE
    res = astar(task, args.heuristic, max_expansions=args.max_expansions, max_seconds=args.max_seconds)
    print(f"outcome: {res.outcome.value}  expanded: {res.stats.expanded}  "
          f"time: {res.stats.wall_time:.3f}s", file=sys.stderr)
    if res.outcome is Outcome.UNSOLVABLE:
        return EXIT_UNSOLVABLE
    if res.outcome is Outcome.RESOURCE_LIMIT:
        return EXIT_LIMIT
    text = serialize_plan(res.plan, task)
    if args.plan:
        Path(args.plan).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    if compiled is not None:
        try:
            d = decode(res.plan, compiled)
        except DecodeMismatch as e:
            _err(str(e))
            return EXIT_DECODE
        print(f"decoded: cost={d.cost} {compiled.metric}={d.dispersion}")
        orig = "".join(f"{s}\n" for s in d.plan.steps) + f"; cost = {d.cost}\n"
        if args.plan:
            Path(_orig_plan_path(Path(args.plan))).write_text(orig, encoding="utf-8")
        else:
            sys.stdout.write("; original plan\n" + orig)
    return EXIT_OK


def _orig_plan_path(plan: Path) -> Path:
    if plan.name.endswith(".plan"):
        return plan.with_name(plan.name[: -len(".plan")] + ".orig.plan")
    return plan.with_name(plan.name + ".orig")


def cmd_metrics(args) -> int:
    task = _load_task(args.task)
    if task is None:
        return EXIT_PARSE
    try:
        plan = read_plan(args.plan)
    except (OSError, ParseError) as e:
        _err(f"{args.plan}: {e}")
        return EXIT_PARSE
    if not validate(task, plan):
        _err(f"{args.plan}: plan is not valid for {args.task}")
        return EXIT_INVALID_PLAN
    m = MetricReport.of(plan.cost_vector(task))
    print(f"{m.cost},{m.count},{m.delta},{m.range},{round(m.stddev, 4)!r}")
    return EXIT_OK


def cmd_generate(args) -> int:
    try:
        spec = json.loads(Path(args.spec).read_text(encoding="utf-8"))
        if args.domain == "navigation":
            task = gen_navigation(NavSpec.from_dict(spec))
        else:
            task = gen_finance(FinanceSpec.from_dict(spec))
    except (OSError, ValueError) as e:
        _err(f"{args.spec}: {e}")
        return EXIT_PARSE
    write_task(args.out, task)
    print(f"|F| = {len(task.props)}  |A| = {len(task.actions)}")
    return EXIT_OK


def cmd_oracle(args) -> int:
    task = _load_task(args.task)
    if task is None:
        return EXIT_PARSE
    res = oracle.enumerate_simple_plans(task, args.max_plans, args.max_states)
    print(f"simple plans: {len(res.plans)}  complete: {res.complete}  reachable states: {res.reachable_states}")
    if not res.plans:
        return EXIT_UNSOLVABLE
    for metric in METRICS:
        for order in oracle.ORDERS:
            plans, value = oracle.lex_min(task, res.plans, metric, order)
            print(f"{metric} {order}: value={value} plans={len(plans)} e.g. {' '.join(plans[0].steps)}")
    return EXIT_OK if res.complete else EXIT_LIMIT


def cmd_bench(args) -> int:
    approaches = args.approaches.split(",") if args.approaches else list(bench.APPROACHES)
    unknown = [a for a in approaches if a not in bench.APPROACHES]
    if unknown:
        _err(f"unknown approaches: {', '.join(unknown)}")
        return EXIT_PARSE
    instances = bench.load_instances(args.instances)
    records = bench.run_bench(instances, approaches, args.budget, args.heuristic, args.jobs)
    text = bench.records_csv(records)
    out = Path(args.out)
    out.write_text(text, encoding="utf-8")
    summary = Path(args.summary) if args.summary else out.with_name(out.stem + ".summary.csv")
    summary.write_text(bench.summary_csv(bench.summarize(bench.parse_records(text))), encoding="utf-8")
    print(f"{len(records)} records -> {out}; summary -> {summary}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="uniplan", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compile", help="compile a task for a dispersion metric and order")
    c.add_argument("task")
    c.add_argument("--metric", choices=METRICS, required=True)
    c.add_argument("--order", choices=("cd", "dc"), required=True)
    c.add_argument("--delta-mode", choices=("paper", "strict"), default="strict")
    c.add_argument("-o", "--out", required=True, help="compiled *.task.json")
    c.add_argument("--meta", help="sidecar path (default: next to --out as *.meta.json)")
    c.set_defaults(func=cmd_compile)

    s = sub.add_parser("solve", help="optimal A* search; decodes when --meta is given")
    s.add_argument("task")
    s.add_argument("--meta")
    s.add_argument("--heuristic", choices=HEURISTICS, default="hmax")
    s.add_argument("--max-expansions", type=int)
    s.add_argument("--max-seconds", type=float)
    s.add_argument("--plan", help="write the plan here (default: stdout)")
    s.set_defaults(func=cmd_solve)

    m = sub.add_parser("metrics", help="print cost,#,delta,range,stddev of a plan")
    m.add_argument("task")
    m.add_argument("plan")
    m.set_defaults(func=cmd_metrics)

    g = sub.add_parser("generate", help="generate a task from a navigation or finance spec")
    g.add_argument("domain", choices=("navigation", "finance"))
    g.add_argument("spec")
    g.add_argument("-o", "--out", required=True)
    g.set_defaults(func=cmd_generate)

    o = sub.add_parser("oracle", help="enumerate simple plans and report lexicographic optima")
    o.add_argument("task")
    o.add_argument("--max-plans", type=int, default=100_000)
    o.add_argument("--max-states", type=int, default=1_000_000)
    o.set_defaults(func=cmd_oracle)

    b = sub.add_parser("bench", help="run the approach matrix over a directory of *.task.json")
    b.add_argument("instances")
    b.add_argument("--approaches", help="comma-separated subset of " + ",".join(bench.APPROACHES))
    b.add_argument("--budget", type=float, help="seconds per search")
    b.add_argument("--heuristic", choices=HEURISTICS, default="hmax")
    b.add_argument("--jobs", type=int, default=1)
    b.add_argument("--out", required=True)
    b.add_argument("--summary")
    b.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
