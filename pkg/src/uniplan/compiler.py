"""Task-to-task compilations whose cost-optimal plans are lexicographically
optimal for (cost, dispersion) or (dispersion, cost).

Three dispersion metrics are supported: number of distinct action costs
(``count``), largest adjacent cost jump (``delta``) and cost range
(``range``). Original costs are scaled by ``W`` and dispersion is charged in
multiples of ``omega_d``, so a compiled plan's total cost packs both
objectives into one integer; :func:`decode` unpacks it.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from math import comb
from typing import NamedTuple

from .metrics import METRICS, dispersion
from .task import MAX_ACTION_COST, Action, Literal, Plan, Task, plan_cost

COST_FIRST_SCALE = 10**6
DISPERSION_FIRST_WEIGHT = 2 * 10**6
ORDERS = ("cd", "dc")
DELTA_MODES = ("paper", "strict")


class CompileError(ValueError):
    pass


class EmptyTask(CompileError):
    pass


class BoundViolation(CompileError):
    pass


class DecodeMismatch(RuntimeError):
    pass


class BoundUnverified(UserWarning):
    def __init__(self, message: str, bound: int | None = None):
        super().__init__(message)
        self.bound = bound


@dataclass(frozen=True)
class CostAlphabet:
    costs: tuple[int, ...]

    @property
    def min(self) -> int:
        return self.costs[0]

    @property
    def max(self) -> int:
        return self.costs[-1]

    def __len__(self) -> int:
        return len(self.costs)

    def __iter__(self):
        return iter(self.costs)


@dataclass(frozen=True)
class AbsSet:
    values: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __contains__(self, x) -> bool:
        return x in self.values


def cost_alphabet(task_or_costs) -> CostAlphabet:
    if isinstance(task_or_costs, Task):
        costs = [a.cost for a in task_or_costs.actions]
    else:
        costs = list(task_or_costs)
    if not costs:
        raise EmptyTask("cost alphabet of a task without actions")
    return CostAlphabet(tuple(sorted(set(costs))))


def abs_set(alphabet) -> AbsSet:
    """All |m - n| for m, n drawn from the alphabet plus 0: every possible adjacent jump."""
    vals = set(alphabet) | {0}
    return AbsSet(tuple(sorted({abs(m - n) for m in vals for n in vals})))


def abs_set_bound(alphabet) -> int:
    """Largest possible size of the abs set: every pair of distinct values in
    alphabet + {0} gives a new nonzero difference, and 0 itself is always in."""
    k = len(set(alphabet) | {0})
    return comb(k, 2) + 1


@dataclass(frozen=True)
class WeightScheme:
    order: str
    W: int
    omega_d: int
    certified: bool = True
    bound: int | None = None


def dispersion_bound(task: Task, metric: str) -> int:
    """Largest dispersion any plan of ``task`` can have under ``metric``."""
    alphabet = cost_alphabet(task)
    if metric == "count":
        return len(alphabet)
    if metric in ("delta", "range"):
        return abs_set(alphabet).values[-1]
    raise ValueError(f"unknown metric {metric!r}")


def make_scheme(order: str, task: Task, metric: str, reachable_states: int | None = None) -> WeightScheme:
    """Integer weights for a lexicographic order.

    Cost-first scales costs by 10^6 and charges dispersion at weight 1; this
    is certified statically since dispersion is bounded by the cost alphabet.
    Dispersion-first charges dispersion at 2*10^6, which is only safe while
    every relevant plan costs less than that; with a known reachable-state
    count the bound |S| * max cost certifies it, otherwise a BoundUnverified
    warning is issued and :func:`decode` re-checks every result.
    """
    if metric not in METRICS:
        raise ValueError(f"unknown metric {metric!r}")
    if order == "cd":
        bound = dispersion_bound(task, metric)
        if bound >= COST_FIRST_SCALE:
            raise BoundViolation(
                f"{metric} dispersion can reach {bound}, not below the cost scale {COST_FIRST_SCALE}"
            )
        return WeightScheme("cd", COST_FIRST_SCALE, 1, True, bound)
    if order == "dc":
        if reachable_states is not None:
            bound = reachable_states * cost_alphabet(task).max
            if bound < DISPERSION_FIRST_WEIGHT:
                return WeightScheme("dc", 1, DISPERSION_FIRST_WEIGHT, True, bound)
            msg = f"plan-cost bound {bound} is not below omega_d = {DISPERSION_FIRST_WEIGHT}"
        else:
            bound = None
            msg = "plan-cost bound unknown; omega_d = 2000000 assumed loose"
        warnings.warn(BoundUnverified(msg, bound), stacklevel=2)
        return WeightScheme("dc", 1, DISPERSION_FIRST_WEIGHT, False, bound)
    raise ValueError(f"unknown order {order!r}")


@dataclass(frozen=True)
class CompiledTask:
    task: Task
    metric: str
    scheme: WeightScheme
    origin: dict[str, str | None]
    original_costs: dict[str, int]
    delta_mode: str | None = None
    alphabet: tuple[int, ...] = field(default=())


class _Builder:
    """Accumulates the compiled task; original propositions keep their ids."""

    def __init__(self, task: Task):
        self.task = task
        self.props = list(task.props)
        self.index = dict(task.prop_index)
        self.actions: list[Action] = []
        self.origin: dict[str, str | None] = {}

    def prop(self, name: str) -> int:
        if name in self.index:
            raise CompileError(f"proposition {name!r} already exists in the task")
        self.index[name] = len(self.props)
        self.props.append(name)
        return self.index[name]

    def action(self, name, pre, add, delete, cost, origin):
        if name in self.origin:
            raise CompileError(f"compiled action name collision: {name!r}")
        if cost > MAX_ACTION_COST:
            raise BoundViolation(f"compiled cost {cost} of {name!r} overflows 64-bit search")
        self.actions.append(Action(name, frozenset(pre), frozenset(add), frozenset(delete), cost))
        self.origin[name] = origin

    def build(self, init, goal) -> Task:
        return Task(tuple(self.props), tuple(self.actions), frozenset(init), frozenset(goal))


def _pos(p: int) -> Literal:
    return Literal(p, True)


def _neg(p: int) -> Literal:
    return Literal(p, False)


def _finish(task, b, init, goal, metric, scheme, delta_mode=None) -> CompiledTask:
    return CompiledTask(
        task=b.build(init, goal),
        metric=metric,
        scheme=scheme,
        origin=b.origin,
        original_costs={a.name: a.cost for a in task.actions},
        delta_mode=delta_mode,
        alphabet=cost_alphabet(task).costs,
    )


def compile_count(task: Task, scheme: WeightScheme) -> CompiledTask:
    alphabet = cost_alphabet(task)
    W, w = scheme.W, scheme.omega_d
    b = _Builder(task)
    used = {c: b.prop(f"used_{c}") for c in alphabet}
    for a in task.actions:
        u = used[a.cost]
        b.action(f"{a.name}__u", a.pre | {_pos(u)}, a.add, a.delete, W * a.cost, a.name)
        b.action(f"{a.name}__nu", a.pre | {_neg(u)}, a.add | {u}, a.delete, W * a.cost + w, a.name)
    return _finish(task, b, task.init, task.goal, "count", scheme)


def compile_delta(task: Task, scheme: WeightScheme, mode: str = "strict") -> CompiledTask:
    """Delta compilation.

    ``paper`` starts both counters at the smallest action cost, following the
    original formulation: the first action then emits a jump against that cost and the
    final charge is at least that cost. ``strict`` starts the maximum at 0
    and routes the first action through a dedicated ``__first`` variant that
    only records its cost, so the charge equals the adjacent-jump maximum.
    """
    if mode not in DELTA_MODES:
        raise ValueError(f"unknown delta mode {mode!r}")
    alphabet = cost_alphabet(task)
    jumps = abs_set(alphabet)
    W, w = scheme.W, scheme.omega_d
    b = _Builder(task)
    prev = {c: b.prop(f"prev_cost_{c}") for c in alphabet}
    delta = {i: b.prop(f"delta_{i}") for i in jumps}
    maxd = {i: b.prop(f"max_delta_{i}") for i in jumps}
    check = b.prop("check")
    end = b.prop("end")
    first = b.prop("first") if mode == "strict" else None

    for a in task.actions:
        c = a.cost
        if first is not None:
            dele = {first} if c == alphabet.min else {first, prev[alphabet.min]}
            b.action(f"{a.name}__first", a.pre | {_pos(first)}, a.add | {prev[c]},
                     a.delete | dele, W * c, a.name)
        for i in alphabet:
            pre = {_pos(prev[i]), _neg(check)}
            if first is not None:
                pre.add(_neg(first))
            add = {prev[c], delta[abs(i - c)], check}
            dele = set() if i == c else {prev[i]}
            b.action(f"{a.name}__d{i}", a.pre | pre, a.add | add, a.delete | dele, W * c, a.name)

    for i in jumps:
        for j in jumps:
            pre = {_pos(check), _pos(delta[i]), _pos(maxd[j])}
            if i > j:
                b.action(f"upd__{i}_{j}", pre, {maxd[i]}, {check, delta[i], maxd[j]}, 0, None)
            else:
                b.action(f"noupd__{i}_{j}", pre, (), {check, delta[i]}, 0, None)
    for i in jumps:
        b.action(f"end__{i}", task.goal | {_neg(check), _pos(maxd[i])}, {end}, (), i * w, None)

    if mode == "paper":
        init = task.init | {prev[alphabet.min], maxd[alphabet.min]}
    else:
        init = task.init | {prev[alphabet.min], maxd[0], first}
    return _finish(task, b, init, {_pos(end)}, "delta", scheme, mode)


def compile_range(task: Task, scheme: WeightScheme) -> CompiledTask:
    """Range compilation.

    The min counter starts at the largest cost and the max counter at the
    smallest, so the first action always overwrites whichever is wrong. The
    end charge is clamped at 0 for the sentinel pair that only the empty
    plan can still hold.
    """
    alphabet = cost_alphabet(task)
    W, w = scheme.W, scheme.omega_d
    b = _Builder(task)
    lo = {c: b.prop(f"min_cost_{c}") for c in alphabet}
    hi = {c: b.prop(f"max_cost_{c}") for c in alphabet}
    end = b.prop("end")
    for a in task.actions:
        c = a.cost
        for i in alphabet:
            for j in alphabet:
                add, dele = set(), set()
                if c < i:
                    add.add(lo[c])
                    dele.add(lo[i])
                if c > j:
                    add.add(hi[c])
                    dele.add(hi[j])
                b.action(f"{a.name}__r{i}_{j}", a.pre | {_pos(lo[i]), _pos(hi[j])},
                         a.add | add, a.delete | dele, W * c, a.name)
    for i in alphabet:
        for j in alphabet:
            b.action(f"end__{i}_{j}", task.goal | {_pos(lo[i]), _pos(hi[j])}, {end}, (),
                     max(j - i, 0) * w, None)
    init = task.init | {lo[alphabet.max], hi[alphabet.min]}
    return _finish(task, b, init, {_pos(end)}, "range", scheme)


def compile_task(
    task: Task,
    metric: str,
    order: str,
    delta_mode: str = "strict",
    scheme: WeightScheme | None = None,
    reachable_states: int | None = None,
) -> CompiledTask:
    if scheme is None:
        scheme = make_scheme(order, task, metric, reachable_states)
    if metric == "count":
        return compile_count(task, scheme)
    if metric == "delta":
        return compile_delta(task, scheme, delta_mode)
    if metric == "range":
        return compile_range(task, scheme)
    raise ValueError(f"unknown metric {metric!r}")


class Decoded(NamedTuple):
    plan: Plan
    cost: int
    dispersion: int


def project(compiled_plan: Plan, compiled: CompiledTask) -> Plan:
    steps = []
    for s in compiled_plan.steps:
        if s not in compiled.origin:
            raise DecodeMismatch(f"{s!r} is not an action of the compiled task")
        if compiled.origin[s] is not None:
            steps.append(compiled.origin[s])
    return Plan(tuple(steps))


def decode(compiled_plan: Plan, compiled: CompiledTask) -> Decoded:
    """Recover the original plan and its (cost, dispersion) from a compiled plan.

    The pair is read off the compiled total cost and cross-checked against a
    direct recomputation on the projected plan.
    """
    original = project(compiled_plan, compiled)
    total = plan_cost(compiled.task, compiled_plan)
    scheme = compiled.scheme
    if scheme.order == "cd":
        cost, rest = divmod(total, scheme.W)
        disp = rest // scheme.omega_d
    else:
        disp, cost = divmod(total, scheme.omega_d)
    costs = [compiled.original_costs[s] for s in original.steps]
    real_cost = sum(costs)
    if compiled.metric == "delta" and compiled.delta_mode == "paper":
        real_disp = _seeded_delta(costs, compiled.alphabet[0])
    else:
        real_disp = dispersion(compiled.metric, costs)
    if (cost, disp) != (real_cost, real_disp):
        raise DecodeMismatch(
            f"compiled total {total} decodes to (cost={cost}, {compiled.metric}={disp}) "
            f"but the projected plan has (cost={real_cost}, {compiled.metric}={real_disp})"
        )
    return Decoded(original, cost, disp)


def _seeded_delta(costs, start: int) -> int:
    prev = best = start
    for c in costs:
        best = max(best, abs(prev - c))
        prev = c
    return best


def to_meta(compiled: CompiledTask) -> dict:
    return {
        "metric": compiled.metric,
        "order": compiled.scheme.order,
        "W": compiled.scheme.W,
        "omega_d": compiled.scheme.omega_d,
        "delta_mode": compiled.delta_mode,
        "origin": dict(compiled.origin),
        "original_costs": dict(compiled.original_costs),
    }


def from_meta(meta: dict, task: Task) -> CompiledTask:
    scheme = WeightScheme(meta["order"], int(meta["W"]), int(meta["omega_d"]))
    costs = {k: int(v) for k, v in meta["original_costs"].items()}
    return CompiledTask(
        task=task,
        metric=meta["metric"],
        scheme=scheme,
        origin=dict(meta["origin"]),
        original_costs=costs,
        delta_mode=meta.get("delta_mode"),
        alphabet=tuple(sorted(set(costs.values()))),
    )
