"""Deterministic task suites shared by the tests, the acceptance run and the benchmarks."""
from __future__ import annotations

import random

from . import oracle
from .domains import (DEMO_NAV, FinanceSpec, NavSpec, gen_finance, gen_navigation, random_finance_spec,
                      random_nav_spec, random_task)
from .task import Task


def _enumerable(task: Task, max_plans: int) -> bool:
    res = oracle.enumerate_simple_plans(task, max_plans=max_plans, max_states=200_000)
    return res.complete and bool(res.plans)


def random_fixture_tasks(n: int, seed: int = 0, max_plans: int = 5_000) -> list[Task]:
    """Solvable random tasks whose simple plans can all be listed."""
    rng = random.Random(seed)
    out = []
    while len(out) < n:
        task = random_task(rng, n_props=rng.randint(3, 5), n_actions=rng.randint(4, 8),
                           max_cost=rng.choice((3, 4, 6)))
        if _enumerable(task, max_plans):
            out.append(task)
    return out


def fixture_suite(seed: int = 0) -> list[tuple[str, Task]]:
    """Thirty-odd tasks with complete simple-plan enumeration: random, grid and savings."""
    rng = random.Random(seed)
    suite = [(f"random-{i:02d}", t) for i, t in enumerate(random_fixture_tasks(18, seed))]
    suite.append(("nav-demo", gen_navigation(DEMO_NAV)))
    suite.append(("nav-1x2", gen_navigation(NavSpec(1, 2, [[1, 4]], (0, 0), (0, 1)))))
    suite.append(("nav-2x2", gen_navigation(NavSpec(2, 2, [[1, 2], [2, 1]], (0, 0), (1, 1)))))
    for i in range(5):
        spec = random_nav_spec(rng, rng.choice((2, 3)), rng.choice((3, 4)), 4)
        suite.append((f"nav-{i:02d}", gen_navigation(spec)))
    suite.append(("finance-unit", gen_finance(FinanceSpec(4, 4, ((1, 1),)))))
    suite.append(("finance-3x3", gen_finance(FinanceSpec(6, 3, ((1, 1), (2, 3), (3, 4))))))
    for i in range(4):
        spec = random_finance_spec(rng, horizon=rng.choice((3, 4)), n_levels=rng.choice((2, 3)))
        suite.append((f"finance-{i:02d}", gen_finance(spec)))
    return suite


def solvable_random_tasks(n: int, seed: int = 0, max_states: int = 5_000) -> list[Task]:
    """Random solvable tasks with a bounded reachable state space (not necessarily enumerable)."""
    rng = random.Random(seed)
    out = []
    while len(out) < n:
        task = random_task(rng, n_props=rng.randint(4, 12), n_actions=rng.randint(6, 24),
                           max_cost=rng.choice((2, 4, 8)), allow_zero=rng.random() < 0.2)
        sweep = oracle.state_sweep(task, limit=max_states)
        if sweep.complete and any(task.is_goal(s) for s in sweep.states):
            out.append(task)
    return out
