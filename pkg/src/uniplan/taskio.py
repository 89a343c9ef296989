"""Text formats: canonical JSON tasks and line-oriented plan files."""
from __future__ import annotations

import json
import re
from typing import Any

from .task import Action, InvalidTask, Literal, Plan, Task, plan_cost

NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_\-]*\Z")
TASK_KEYS = ("propositions", "actions", "init", "goal")
ACTION_KEYS = ("name", "pre", "add", "del", "cost")


class ParseError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.message = message


class TaskSyntaxError(ParseError):
    pass


class SemanticError(ParseError):
    pass


def _line_of(text: str, token: str | None) -> int:
    if token is None:
        return 1
    pos = text.find(json.dumps(token))
    if pos < 0:
        return 1
    return text.count("\n", 0, pos) + 1


def _reject_duplicate_keys(pairs):
    out = {}
    for k, v in pairs:
        if k in out:
            raise ValueError(f"duplicate key {k!r}")
        out[k] = v
    return out


def parse_task(text: str) -> Task:
    try:
        doc = json.loads(text, object_pairs_hook=_reject_duplicate_keys)
    except json.JSONDecodeError as e:
        raise TaskSyntaxError(e.lineno, e.msg) from None
    except ValueError as e:
        raise TaskSyntaxError(1, str(e)) from None

    def fail(msg: str, token: str | None = None, syntax: bool = False):
        cls = TaskSyntaxError if syntax else SemanticError
        raise cls(_line_of(text, token), msg)

    if not isinstance(doc, dict):
        fail("top level must be an object", syntax=True)
    for key in doc:
        if key not in TASK_KEYS:
            fail(f"unknown key {key!r}", key, syntax=True)
    for key in TASK_KEYS:
        if key not in doc:
            fail(f"missing key {key!r}", syntax=True)

    def str_list(value, where: str) -> list[str]:
        if not isinstance(value, list) or not all(isinstance(x, str) for x in value):
            fail(f"{where} must be an array of strings", where, syntax=True)
        return value

    props = str_list(doc["propositions"], "propositions")
    index: dict[str, int] = {}
    for p in props:
        if not NAME_RE.match(p):
            fail(f"invalid proposition name {p!r}", p, syntax=True)
        if p in index:
            fail(f"duplicate proposition {p!r}", p)
        index[p] = len(index)

    def prop(name: str) -> int:
        if name not in index:
            fail(f"unknown proposition {name!r}", name)
        return index[name]

    def literal(text_: str) -> Literal:
        if text_.startswith("!"):
            return Literal(prop(text_[1:]), False)
        return Literal(prop(text_), True)

    def literal_set(items: list[str], where: str) -> frozenset[Literal]:
        lits = [literal(x) for x in items]
        polarity: dict[int, bool] = {}
        for lit, raw in zip(lits, items):
            if polarity.setdefault(lit.prop, lit.positive) != lit.positive:
                fail(f"{where}: inconsistent literals on {props[lit.prop]!r}", raw)
        return frozenset(lits)

    if not isinstance(doc["actions"], list):
        fail("actions must be an array", "actions", syntax=True)
    actions = []
    seen: set[str] = set()
    for entry in doc["actions"]:
        if not isinstance(entry, dict):
            fail("action entries must be objects", "actions", syntax=True)
        name = entry.get("name")
        if not isinstance(name, str) or not NAME_RE.match(name):
            fail(f"invalid action name {name!r}", name if isinstance(name, str) else None, syntax=True)
        for key in entry:
            if key not in ACTION_KEYS:
                fail(f"action {name!r}: unknown key {key!r}", name, syntax=True)
        if name in seen:
            fail(f"duplicate action {name!r}", name)
        seen.add(name)
        cost = entry.get("cost", 1)
        if isinstance(cost, bool) or not isinstance(cost, int):
            fail(f"action {name!r}: cost must be an integer", name, syntax=True)
        if cost < 0:
            fail(f"action {name!r}: negative cost {cost}", name)
        pre = literal_set(str_list(entry.get("pre", []), "pre"), name)
        add = frozenset(prop(x) for x in str_list(entry.get("add", []), "add"))
        dele = frozenset(prop(x) for x in str_list(entry.get("del", []), "del"))
        if add & dele:
            fail(f"action {name!r}: add and del overlap", name)
        try:
            actions.append(Action(name, pre, add, dele, cost))
        except InvalidTask as e:
            fail(str(e), name)

    init = frozenset(prop(x) for x in str_list(doc["init"], "init"))
    goal = literal_set(str_list(doc["goal"], "goal"), "goal")
    try:
        return Task(tuple(props), tuple(actions), init, goal)
    except InvalidTask as e:
        fail(str(e))


def _lits(task: Task, lits) -> list[str]:
    return [("" if l.positive else "!") + task.props[l.prop] for l in sorted(lits)]


def task_to_dict(task: Task) -> dict[str, Any]:
    return {
        "propositions": list(task.props),
        "actions": [
            {
                "name": a.name,
                "pre": _lits(task, a.pre),
                "add": [task.props[i] for i in sorted(a.add)],
                "del": [task.props[i] for i in sorted(a.delete)],
                "cost": a.cost,
            }
            for a in task.actions
        ],
        "init": [task.props[i] for i in sorted(task.init)],
        "goal": _lits(task, task.goal),
    }


def serialize_task(task: Task) -> str:
    return json.dumps(task_to_dict(task), indent=2, ensure_ascii=False) + "\n"


def parse_plan(text: str) -> Plan:
    steps = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith(";"):
            continue
        if not NAME_RE.match(line):
            raise TaskSyntaxError(lineno, f"invalid action name {line!r}")
        steps.append(line)
    return Plan(tuple(steps))


def serialize_plan(plan: Plan, task: Task) -> str:
    cost = plan_cost(task, plan)
    return "".join(f"{s}\n" for s in plan.steps) + f"; cost = {cost}\n"


def read_task(path) -> Task:
    with open(path, encoding="utf-8") as f:
        return parse_task(f.read())


def write_task(path, task: Task) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(serialize_task(task))


def read_plan(path) -> Plan:
    with open(path, encoding="utf-8") as f:
        return parse_plan(f.read())


def write_plan(path, plan: Plan, task: Task) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(serialize_plan(plan, task))
