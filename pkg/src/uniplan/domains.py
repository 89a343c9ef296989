"""Generators for grid navigation, financial planning and random small tasks."""
from __future__ import annotations

import os
import random
from dataclasses import dataclass

from .task import InvalidTask, Task, make_task


class InvalidSpec(ValueError):
    pass


class TargetUnreachable(InvalidSpec):
    pass


@dataclass(frozen=True)
class NavSpec:
    rows: int
    cols: int
    cell_cost: tuple[tuple[int, ...], ...]
    start: tuple[int, int]
    goal: tuple[int, int]

    def __post_init__(self):
        object.__setattr__(self, "cell_cost", tuple(tuple(r) for r in self.cell_cost))
        object.__setattr__(self, "start", tuple(self.start))
        object.__setattr__(self, "goal", tuple(self.goal))
        if self.rows < 1 or self.cols < 1:
            raise InvalidSpec("grid must have at least one row and column")
        if len(self.cell_cost) != self.rows or any(len(r) != self.cols for r in self.cell_cost):
            raise InvalidSpec("cell_cost must be a rows x cols matrix")
        if any(not isinstance(c, int) or c < 1 for r in self.cell_cost for c in r):
            raise InvalidSpec("cell costs must be positive integers")
        for r, c in (self.start, self.goal):
            if not (0 <= r < self.rows and 0 <= c < self.cols):
                raise InvalidSpec(f"cell ({r}, {c}) is outside the grid")
        if self.start == self.goal:
            raise InvalidSpec("start and goal must differ")

    @classmethod
    def from_dict(cls, d: dict) -> "NavSpec":
        try:
            return cls(d["rows"], d["cols"], d["cell_cost"], d["start"], d["goal"])
        except (KeyError, TypeError) as e:
            raise InvalidSpec(f"bad navigation spec: {e}") from None

    def to_dict(self) -> dict:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "cell_cost": [list(r) for r in self.cell_cost],
            "start": list(self.start),
            "goal": list(self.goal),
        }


def _at(r: int, c: int) -> str:
    return f"at_{r}_{c}"


def gen_navigation(spec: NavSpec) -> Task:
    """Grid driving task: moving into a cell pays that cell's cost; the start cell is free."""
    props = [_at(r, c) for r in range(spec.rows) for c in range(spec.cols)]
    actions = []
    for r in range(spec.rows):
        for c in range(spec.cols):
            for dr, dc in ((-1, 0), (1, 0), (0, -1), (0, 1)):
                r2, c2 = r + dr, c + dc
                if 0 <= r2 < spec.rows and 0 <= c2 < spec.cols:
                    actions.append({
                        "name": f"move_{r}_{c}_to_{r2}_{c2}",
                        "pre": [_at(r, c)],
                        "add": [_at(r2, c2)],
                        "del": [_at(r, c)],
                        "cost": spec.cell_cost[r2][c2],
                    })
    return make_task(props, actions, [_at(*spec.start)], [_at(*spec.goal)])


# Derived fixture, not a reproduction of any published map: found by sampling
# 3x5 matrices over {1..4} until the oracle showed three cost-11 routes with
# (#, delta, range) = (2,1,1), (3,2,2), (3,3,3) and a cost-12 single-cost route.
# No 2x5 matrix over {1..4} has that structure.
DEMO_NAV = NavSpec(
    rows=3,
    cols=5,
    cell_cost=((2, 2, 2, 2, 2), (2, 1, 3, 1, 3), (3, 4, 1, 1, 1)),
    start=(2, 0),
    goal=(0, 4),
)


def random_nav_spec(rng: random.Random, rows: int, cols: int, max_cost: int) -> NavSpec:
    costs = [[rng.randint(1, max_cost) for _ in range(cols)] for _ in range(rows)]
    start = (rng.randrange(rows), 0)
    goal = (rng.randrange(rows), cols - 1)
    if start == goal:
        goal = ((goal[0] + 1) % rows, cols - 1) if rows > 1 else (0, cols - 1)
    return NavSpec(rows, cols, costs, start, goal)


@dataclass(frozen=True)
class FinanceSpec:
    target: int
    horizon: int
    levels: tuple[tuple[int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "levels", tuple(sorted(tuple(l) for l in self.levels)))
        if self.target < 1 or self.horizon < 1:
            raise InvalidSpec("target and horizon must be positive")
        if not self.levels:
            raise InvalidSpec("at least one savings level is required")
        amounts = [a for a, _ in self.levels]
        costs = [c for _, c in self.levels]
        if any(a < 1 for a in amounts) or len(set(amounts)) != len(amounts):
            raise InvalidSpec("amounts must be distinct and positive")
        if any(c < 0 for c in costs) or any(x >= y for x, y in zip(costs, costs[1:])):
            raise InvalidSpec("costs must increase strictly with the saved amount")

    @classmethod
    def from_dict(cls, d: dict) -> "FinanceSpec":
        try:
            return cls(d["target"], d["horizon"], tuple(tuple(x) for x in d["levels"]))
        except (KeyError, TypeError) as e:
            raise InvalidSpec(f"bad finance spec: {e}") from None

    def to_dict(self) -> dict:
        return {"target": self.target, "horizon": self.horizon, "levels": [list(l) for l in self.levels]}


def gen_finance(spec: FinanceSpec) -> Task:
    """Monthly savings task.

    Each month one savings level is chosen; balances are capped at the target
    so ``saved_<target>`` means the goal amount was reached. A zero-cost
    ``check_goal`` action then marks ``achieved``, the goal proposition.
    """
    top = max(a for a, _ in spec.levels)
    if top * spec.horizon < spec.target:
        raise TargetUnreachable(f"at most {top * spec.horizon} can be saved in {spec.horizon} months")
    # balances reachable after t months
    layers = [{0}]
    for _ in range(spec.horizon):
        layers.append({min(s + a, spec.target) for s in layers[-1] if s < spec.target for a, _ in spec.levels})
    balances = sorted(set().union(*layers))
    props = [f"month_{t}" for t in range(spec.horizon + 1)]
    props += [f"saved_{s}" for s in balances]
    props.append("achieved")
    actions = []
    for t in range(spec.horizon):
        for s in sorted(layers[t]):
            if s >= spec.target:
                continue
            for amount, cost in spec.levels:
                s2 = min(s + amount, spec.target)
                actions.append({
                    "name": f"save_{amount}_m{t}_s{s}",
                    "pre": [f"month_{t}", f"saved_{s}"],
                    "add": [f"month_{t + 1}", f"saved_{s2}"],
                    "del": [f"month_{t}", f"saved_{s}"],
                    "cost": cost,
                })
    if spec.target not in balances:
        raise TargetUnreachable("target cannot be reached")
    actions.append({
        "name": "check_goal",
        "pre": [f"saved_{spec.target}"],
        "add": ["achieved"],
        "del": [],
        "cost": 0,
    })
    try:
        return make_task(props, actions, ["month_0", "saved_0"], ["achieved"])
    except InvalidTask as e:
        raise InvalidSpec(str(e)) from None


def random_finance_spec(rng: random.Random, horizon: int, n_levels: int, target: int | None = None) -> FinanceSpec:
    amounts = sorted(rng.sample(range(1, 6), n_levels))
    costs = sorted(rng.sample(range(1, 10), n_levels))
    if target is None:
        target = rng.randint(max(amounts), max(amounts) * horizon)
    return FinanceSpec(target, horizon, tuple(zip(amounts, costs)))


def random_task(
    rng: random.Random,
    n_props: int = 5,
    n_actions: int = 8,
    max_cost: int = 4,
    neg_prob: float = 0.15,
    allow_zero: bool = False,
) -> Task:
    """Small random STRIPS task with literal preconditions (for oracle tests)."""
    props = [f"p{i}" for i in range(n_props)]
    actions = []
    for k in range(n_actions):
        chosen = rng.sample(props, rng.randint(0, min(2, n_props)))
        pre = [("!" + p) if rng.random() < neg_prob else p for p in chosen]
        add = rng.sample(props, rng.randint(1, min(2, n_props)))
        rest = [p for p in props if p not in add]
        dele = rng.sample(rest, rng.randint(0, min(2, len(rest))))
        cost = rng.randint(0 if allow_zero else 1, max_cost)
        actions.append({"name": f"a{k}", "pre": pre, "add": add, "del": dele, "cost": cost})
    init = rng.sample(props, rng.randint(0, max(1, n_props // 2)))
    goal = rng.sample(props, rng.randint(1, min(2, n_props)))
    return make_task(props, actions, init, goal)


def seeded_rng(default: int = 0) -> random.Random:
    """RNG seeded from UNIPLAN_SEED when set."""
    return random.Random(int(os.environ.get("UNIPLAN_SEED", default)))
