"""Brute-force ground truth for small tasks.

Everything here works directly on frozenset states through the task model,
independently of the search kernels, so it can be used to check them.
"""
from __future__ import annotations

import heapq
import math
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .metrics import dispersion
from .task import Plan, State, Task, applicable

ORDERS = ("cd", "dc")


class Incomplete(RuntimeError):
    pass


class EmptyPlanSet(ValueError):
    pass


@dataclass
class EnumerationResult:
    plans: list[Plan]
    complete: bool
    reachable_states: int


@dataclass
class SweepResult:
    states: set[State]
    complete: bool


def _successors(task: Task, state: State):
    for a in task.actions:
        if applicable(state, a):
            yield a, frozenset((state - a.delete) | a.add)


def state_sweep(task: Task, limit: int = 100_000) -> SweepResult:
    """Breadth-first set of reachable states; ``complete`` is False if ``limit`` was hit."""
    seen = {task.init}
    queue = deque([task.init])
    while queue:
        s = queue.popleft()
        for _, t in _successors(task, s):
            if t not in seen:
                if len(seen) >= limit:
                    return SweepResult(seen, False)
                seen.add(t)
                queue.append(t)
    return SweepResult(seen, True)


def enumerate_simple_plans(
    task: Task, max_plans: int = 100_000, max_states: int = 1_000_000
) -> EnumerationResult:
    """All plans that never revisit a state, by depth-first search over the state space.

    ``max_states`` bounds the number of search-tree nodes visited.
    """
    plans: list[Plan] = []
    succ_cache: dict[State, list[tuple[str, State]]] = {}

    def successors(s):
        if s not in succ_cache:
            succ_cache[s] = [(a.name, t) for a, t in _successors(task, s)]
        return succ_cache[s]

    if task.is_goal(task.init):
        plans.append(Plan(()))
    path: list[str] = []
    states = [task.init]
    on_path = {task.init}
    stack = [iter(successors(task.init))]
    visited = 0
    complete = True
    while stack:
        step = next(stack[-1], None)
        if step is None:
            stack.pop()
            on_path.discard(states.pop())
            if path:
                path.pop()
            continue
        name, t = step
        if t in on_path:
            continue
        visited += 1
        if visited > max_states:
            complete = False
            break
        path.append(name)
        states.append(t)
        on_path.add(t)
        if task.is_goal(t):
            if len(plans) >= max_plans:
                complete = False
                break
            plans.append(Plan(tuple(path)))
        stack.append(iter(successors(t)))
    reachable = len(succ_cache) if complete else len(state_sweep(task).states)
    return EnumerationResult(plans, complete, reachable)


def plan_value(task: Task, plan: Plan, metric: str, order: str) -> tuple[int, int]:
    costs = plan.cost_vector(task)
    c, d = sum(costs), dispersion(metric, costs)
    if order == "cd":
        return (c, d)
    if order == "dc":
        return (d, c)
    raise ValueError(f"unknown order {order!r}")


def lex_min(
    task: Task, plans: Sequence[Plan], metric: str, order: str
) -> tuple[list[Plan], tuple[int, int]]:
    """Plans attaining the lexicographic minimum and the minimal value pair.

    The pair is (cost, dispersion) for ``cd`` and (dispersion, cost) for ``dc``.
    """
    if not plans:
        raise EmptyPlanSet("lex_min of an empty plan set")
    values = [plan_value(task, p, metric, order) for p in plans]
    best = min(values)
    return [p for p, v in zip(plans, values) if v == best], best


def all_cost_optimal(task: Task, max_plans: int = 100_000, max_states: int = 1_000_000) -> list[Plan]:
    """The set of cost-optimal simple plans; raises Incomplete if enumeration was cut short."""
    res = enumerate_simple_plans(task, max_plans, max_states)
    if not res.complete:
        raise Incomplete("enumeration limits reached")
    if not res.plans:
        return []
    costs = [sum(p.cost_vector(task)) for p in res.plans]
    best = min(costs)
    return [p for p, c in zip(res.plans, costs) if c == best]


def goal_distances(task: Task, limit: int = 100_000) -> dict[State, float]:
    """h* for every reachable state: backward uniform-cost search from the goal states."""
    sweep = state_sweep(task, limit)
    if not sweep.complete:
        raise Incomplete("state sweep limit reached")
    preds: dict[State, list[tuple[State, int]]] = {s: [] for s in sweep.states}
    for s in sweep.states:
        for a, t in _successors(task, s):
            preds[t].append((s, a.cost))
    dist: dict[State, float] = {s: math.inf for s in sweep.states}
    heap = []
    for i, s in enumerate(sweep.states):
        if task.is_goal(s):
            dist[s] = 0
            heap.append((0, i, s))
    heapq.heapify(heap)
    tie = len(heap)
    while heap:
        d, _, s = heapq.heappop(heap)
        if d > dist[s]:
            continue
        for p, c in preds[s]:
            if d + c < dist[p]:
                dist[p] = d + c
                tie += 1
                heapq.heappush(heap, (d + c, tie, p))
    return dist


def seeded_delta(costs: Sequence[int], alphabet_min: int) -> int:
    """Delta as tracked by the verbatim compilation: the counters start at the
    smallest action cost, so the first step contributes a phantom jump and the
    result never drops below that cost."""
    prev, best = alphabet_min, alphabet_min
    for c in costs:
        best = max(best, abs(prev - c))
        prev = c
    return best


def is_simple(task: Task, plan: Plan) -> bool:
    seen = {task.init}
    s = task.init
    for name in plan.steps:
        a = task.action(name)
        s = frozenset((s - a.delete) | a.add)
        if s in seen:
            return False
        seen.add(s)
    return True


def min_cost(plans: Iterable[Plan], task: Task) -> int | None:
    return min((sum(p.cost_vector(task)) for p in plans), default=None)


def _min_cost_with_jump_limit(task: Task, limit: int) -> int | None:
    """Cheapest plan (loops allowed) whose adjacent cost jumps never exceed ``limit``."""
    start = (task.init, None)
    dist = {start: 0}
    heap = [(0, 0, task.init, None)]
    tie = 0
    while heap:
        d, _, s, last = heapq.heappop(heap)
        if d > dist[(s, last)]:
            continue
        if task.is_goal(s):
            return d
        for a, t in _successors(task, s):
            if last is not None and abs(last - a.cost) > limit:
                continue
            key = (t, a.cost)
            nd = d + a.cost
            if nd < dist.get(key, math.inf):
                dist[key] = nd
                tie += 1
                heapq.heappush(heap, (nd, tie, t, a.cost))
    return None


def delta_optimum_any_plan(task: Task, order: str) -> tuple[int, int] | None:
    """Lexicographic (cost, delta) or (delta, cost) optimum over all plans, simple or not.

    Sweeps the jump limit over every possible delta value and solves a
    uniform-cost search on (state, last action cost) pairs for each.
    """
    costs = {a.cost for a in task.actions} | {0}
    limits = sorted({abs(m - n) for m in costs for n in costs})
    by_limit = [(lim, _min_cost_with_jump_limit(task, lim)) for lim in limits]
    feasible = [(lim, c) for lim, c in by_limit if c is not None]
    if not feasible:
        return None
    if order == "dc":
        lim, c = feasible[0]
        return (lim, c)
    best_cost = min(c for _, c in feasible)
    lim = next(lim for lim, c in feasible if c == best_cost)
    return (best_cost, lim)
