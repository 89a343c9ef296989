"""Cost-optimal planning with uniform action costs: dispersion metrics, compilations and A*."""
from __future__ import annotations

from .compiler import (BoundUnverified, BoundViolation, CompiledTask, DecodeMismatch, WeightScheme,
                       abs_set, compile_task, cost_alphabet, decode, make_scheme)
from .metrics import METRICS, MetricReport, metric_count, metric_delta, metric_range, metric_stddev
from .search import BACKEND, Outcome, SearchResult, astar, hmax
from .task import Action, Literal, NotApplicable, Plan, Task, apply, applicable, execute, make_task, plan_cost, validate
from .taskio import ParseError, parse_plan, parse_task, serialize_plan, serialize_task

__all__ = [
    "Action", "BACKEND", "BoundUnverified", "BoundViolation", "CompiledTask", "DecodeMismatch",
    "Literal", "METRICS", "MetricReport", "NotApplicable", "Outcome", "ParseError", "Plan",
    "SearchResult", "Task", "WeightScheme", "abs_set", "apply", "applicable", "astar",
    "compile_task", "cost_alphabet", "decode", "execute", "hmax", "make_scheme", "make_task",
    "metric_count", "metric_delta", "metric_range", "metric_stddev", "parse_plan", "parse_task",
    "plan_cost", "serialize_plan", "serialize_task", "validate",
]
