"""Optimal forward search (A*) with blind and h^max heuristics."""
from __future__ import annotations

import math
import os
import time
from dataclasses import dataclass, field
from enum import Enum

from . import _pykernel
from .task import Action, Plan, State, Task, mask, unmask

if os.environ.get("UNIPLAN_PURE_PYTHON"):
    _ckernel = None
else:
    try:
        from . import _ckernel
    except ImportError:
        _ckernel = None

BACKEND = "cython" if _ckernel is not None else "python"
HEURISTICS = ("blind", "hmax")


def kernel_for(task: Task, backend: str | None = None):
    backend = backend or BACKEND
    if backend == "cython":
        if _ckernel is None:
            raise RuntimeError("compiled kernel is not available")
        return _ckernel.Kernel(task.packed)
    if backend == "python":
        return _pykernel.Kernel(task.packed)
    raise ValueError(f"unknown backend {backend!r}")


class Outcome(str, Enum):
    SOLVED = "solved"
    UNSOLVABLE = "unsolvable"
    RESOURCE_LIMIT = "resource-limit"


@dataclass
class SearchStats:
    expanded: int = 0
    generated: int = 0
    peak_open_size: int = 0
    wall_time: float = 0.0


@dataclass
class SearchResult:
    outcome: Outcome
    plan: Plan | None = None
    cost: int | None = None
    stats: SearchStats = field(default_factory=SearchStats)

    @property
    def solved(self) -> bool:
        return self.outcome is Outcome.SOLVED


_STATUS = {
    _pykernel.SOLVED: Outcome.SOLVED,
    _pykernel.UNSOLVABLE: Outcome.UNSOLVABLE,
    _pykernel.LIMIT: Outcome.RESOURCE_LIMIT,
}


def astar(
    task: Task,
    heuristic: str = "hmax",
    max_expansions: int | None = None,
    max_seconds: float | None = None,
    backend: str | None = None,
) -> SearchResult:
    """Cost-optimal A*.

    Ties on f are broken by lower h, then by generation order, so results are
    deterministic and identical across backends.
    """
    if heuristic not in HEURISTICS:
        raise ValueError(f"unknown heuristic {heuristic!r}")
    t0 = time.perf_counter()
    k = kernel_for(task, backend)
    status, idx, cost, expanded, generated, peak = k.astar(
        heuristic == "hmax",
        max_expansions if max_expansions is not None else 2**62,
        max_seconds or 0.0,
    )
    stats = SearchStats(expanded, generated, peak, time.perf_counter() - t0)
    outcome = _STATUS[status]
    if outcome is Outcome.SOLVED:
        plan = Plan(tuple(task.actions[i].name for i in idx))
        return SearchResult(outcome, plan, cost, stats)
    return SearchResult(outcome, stats=stats)


def hmax(task: Task, state: State, backend: str | None = None) -> float:
    """h^max of ``state``; ``math.inf`` when the goal is relaxed-unreachable."""
    h = kernel_for(task, backend).hmax(mask(state))
    return math.inf if h < 0 else h


def successor_gen(task: Task, state: State) -> list[tuple[Action, State]]:
    k = _pykernel.Kernel(task.packed)
    return [(task.actions[a], unmask(t)) for a, t in k.successors(mask(state))]
