"""Grounded STRIPS tasks with negative preconditions, plan execution and validation.

States are frozensets of proposition ids read under the closed-world
assumption: a proposition absent from the set is false.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, NamedTuple, Sequence

# Any action cost times a 2^16 step bound must stay below 2^63 (64-bit g-values).
MAX_ACTION_COST = (2**63 - 1) >> 16

State = frozenset  # frozenset[int] of true proposition ids


class PlanningError(Exception):
    pass


class InvalidTask(PlanningError, ValueError):
    pass


class UnknownAction(PlanningError, KeyError):
    def __init__(self, name: str):
        super().__init__(name)
        self.name = name

    def __str__(self) -> str:
        return f"unknown action {self.name!r}"


class NotApplicable(PlanningError):
    def __init__(self, step: int, action: str):
        super().__init__(f"step {step}: action {action!r} is not applicable")
        self.step = step
        self.action = action


class Proposition(NamedTuple):
    id: int
    name: str


class Literal(NamedTuple):
    prop: int
    positive: bool = True

    def negate(self) -> "Literal":
        return Literal(self.prop, not self.positive)


def check_consistent(literals: Iterable[Literal]) -> None:
    seen: dict[int, bool] = {}
    for lit in literals:
        if seen.get(lit.prop, lit.positive) != lit.positive:
            raise InvalidTask(f"inconsistent literals on proposition {lit.prop}")
        seen[lit.prop] = lit.positive


@dataclass(frozen=True)
class Action:
    name: str
    pre: frozenset[Literal]
    add: frozenset[int]
    delete: frozenset[int]
    cost: int = 1

    def __post_init__(self):
        if not self.name:
            raise InvalidTask("action name must be non-empty")
        if isinstance(self.cost, bool) or not isinstance(self.cost, int):
            raise InvalidTask(f"{self.name}: cost must be an integer")
        if self.cost < 0:
            raise InvalidTask(f"{self.name}: negative cost {self.cost}")
        if self.cost > MAX_ACTION_COST:
            raise InvalidTask(f"{self.name}: cost {self.cost} exceeds {MAX_ACTION_COST}")
        if self.add & self.delete:
            raise InvalidTask(f"{self.name}: add and del overlap")
        check_consistent(self.pre)

    @property
    def pre_pos(self) -> frozenset[int]:
        return frozenset(l.prop for l in self.pre if l.positive)

    @property
    def pre_neg(self) -> frozenset[int]:
        return frozenset(l.prop for l in self.pre if not l.positive)


class PackedTask(NamedTuple):
    """Bitmask view of a task consumed by the search kernels."""

    n_props: int
    pre_pos: list[int]
    pre_neg: list[int]
    add: list[int]
    delete: list[int]
    cost: list[int]
    init: int
    goal_pos: int
    goal_neg: int


def mask(ids: Iterable[int]) -> int:
    m = 0
    for i in ids:
        m |= 1 << i
    return m


def unmask(m: int) -> frozenset[int]:
    out = []
    i = 0
    while m:
        if m & 1:
            out.append(i)
        m >>= 1
        i += 1
    return frozenset(out)


@dataclass(frozen=True)
class Task:
    props: tuple[str, ...]
    actions: tuple[Action, ...]
    init: frozenset[int]
    goal: frozenset[Literal] = field(default_factory=frozenset)

    def __post_init__(self):
        n = len(self.props)
        if len(set(self.props)) != n:
            raise InvalidTask("duplicate proposition names")
        if any(not p for p in self.props):
            raise InvalidTask("proposition names must be non-empty")
        names = [a.name for a in self.actions]
        if len(set(names)) != len(names):
            dup = next(x for x in names if names.count(x) > 1)
            raise InvalidTask(f"duplicate action {dup!r}")

        def _check(ids, what):
            for i in ids:
                if not 0 <= i < n:
                    raise InvalidTask(f"{what} references unknown proposition {i}")

        _check(self.init, "init")
        _check((l.prop for l in self.goal), "goal")
        check_consistent(self.goal)
        for a in self.actions:
            _check((l.prop for l in a.pre), a.name)
            _check(a.add, a.name)
            _check(a.delete, a.name)

    @property
    def propositions(self) -> list[Proposition]:
        return [Proposition(i, p) for i, p in enumerate(self.props)]

    @cached_property
    def prop_index(self) -> dict[str, int]:
        return {p: i for i, p in enumerate(self.props)}

    @cached_property
    def action_index(self) -> dict[str, int]:
        return {a.name: i for i, a in enumerate(self.actions)}

    def action(self, name: str) -> Action:
        try:
            return self.actions[self.action_index[name]]
        except KeyError:
            raise UnknownAction(name) from None

    @cached_property
    def packed(self) -> PackedTask:
        return PackedTask(
            n_props=len(self.props),
            pre_pos=[mask(a.pre_pos) for a in self.actions],
            pre_neg=[mask(a.pre_neg) for a in self.actions],
            add=[mask(a.add) for a in self.actions],
            delete=[mask(a.delete) for a in self.actions],
            cost=[a.cost for a in self.actions],
            init=mask(self.init),
            goal_pos=mask(l.prop for l in self.goal if l.positive),
            goal_neg=mask(l.prop for l in self.goal if not l.positive),
        )

    def is_goal(self, state: State) -> bool:
        return holds(state, self.goal)


def make_task(
    props: Sequence[str],
    actions: Iterable[Mapping],
    init: Iterable[str],
    goal: Iterable[str] = (),
) -> Task:
    """Build a task from names; literals use a leading ``!`` for negation.

    Each action mapping has keys ``name``, ``pre``, ``add``, ``del`` and
    optionally ``cost`` (default 1).
    """
    props = tuple(props)
    index = {p: i for i, p in enumerate(props)}
    if len(index) != len(props):
        raise InvalidTask("duplicate proposition names")

    def prop(name: str) -> int:
        try:
            return index[name]
        except KeyError:
            raise InvalidTask(f"unknown proposition {name!r}") from None

    def lit(text: str) -> Literal:
        if text.startswith("!"):
            return Literal(prop(text[1:]), False)
        return Literal(prop(text), True)

    built = []
    for spec in actions:
        built.append(
            Action(
                name=spec["name"],
                pre=frozenset(lit(x) for x in spec.get("pre", ())),
                add=frozenset(prop(x) for x in spec.get("add", ())),
                delete=frozenset(prop(x) for x in spec.get("del", ())),
                cost=spec.get("cost", 1),
            )
        )
    return Task(
        props=props,
        actions=tuple(built),
        init=frozenset(prop(x) for x in init),
        goal=frozenset(lit(x) for x in goal),
    )


def holds(state: State, literals: Iterable[Literal]) -> bool:
    for lit in literals:
        if (lit.prop in state) != lit.positive:
            return False
    return True


def applicable(state: State, action: Action) -> bool:
    return holds(state, action.pre)


def apply(state: State, action: Action) -> State:
    if not applicable(state, action):
        raise NotApplicable(0, action.name)
    return frozenset((state - action.delete) | action.add)


@dataclass(frozen=True)
class Plan:
    steps: tuple[str, ...] = ()

    def __post_init__(self):
        if not isinstance(self.steps, tuple):
            object.__setattr__(self, "steps", tuple(self.steps))

    def __len__(self) -> int:
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)

    def cost_vector(self, task: Task) -> tuple[int, ...]:
        return tuple(task.action(s).cost for s in self.steps)


def execute(task: Task, plan: Plan, state: State | None = None) -> State:
    """Apply the plan's steps in order; raises NotApplicable at the first failing step.

    Step indices in the error are 1-based.
    """
    s = task.init if state is None else state
    for k, name in enumerate(plan.steps, start=1):
        a = task.action(name)
        if not applicable(s, a):
            raise NotApplicable(k, name)
        s = frozenset((s - a.delete) | a.add)
    return s


def validate(task: Task, plan: Plan) -> bool:
    try:
        final = execute(task, plan)
    except (NotApplicable, UnknownAction):
        return False
    return task.is_goal(final)


def plan_cost(task: Task, plan: Plan) -> int:
    return sum(plan.cost_vector(task))
