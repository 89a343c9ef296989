from __future__ import annotations

import pytest

from uniplan import oracle
from uniplan.domains import (DEMO_NAV, FinanceSpec, InvalidSpec, NavSpec, TargetUnreachable, gen_finance,
                             gen_navigation, seeded_rng)
from uniplan.metrics import metric_count, metric_range
from uniplan.task import Plan


def test_one_by_two_grid():
    t = gen_navigation(NavSpec(1, 2, [[1, 4]], (0, 0), (0, 1)))
    plans = oracle.enumerate_simple_plans(t).plans
    assert len(plans) == 1 and sum(plans[0].cost_vector(t)) == 4


def test_uniform_grid_has_zero_range():
    t = gen_navigation(NavSpec(3, 3, [[2] * 3] * 3, (0, 0), (2, 2)))
    for p in oracle.all_cost_optimal(t):
        assert metric_range(p.cost_vector(t)) == 0


@pytest.mark.parametrize("bad", [
    dict(rows=1, cols=2, cell_cost=[[1]], start=(0, 0), goal=(0, 1)),
    dict(rows=1, cols=2, cell_cost=[[1, 0]], start=(0, 0), goal=(0, 1)),
    dict(rows=1, cols=2, cell_cost=[[1, 1]], start=(0, 0), goal=(0, 0)),
    dict(rows=1, cols=2, cell_cost=[[1, 1]], start=(0, 0), goal=(0, 5)),
])
def test_nav_spec_validation(bad):
    with pytest.raises(InvalidSpec):
        NavSpec(**bad)


def test_nav_spec_dict_round_trip():
    assert NavSpec.from_dict(DEMO_NAV.to_dict()) == DEMO_NAV


def test_finance_unit_level():
    t = gen_finance(FinanceSpec(4, 4, ((1, 1),)))
    plans = oracle.enumerate_simple_plans(t).plans
    assert len(plans) == 1
    steps = plans[0].steps
    saves = Plan(steps[:-1])
    assert steps[-1] == "check_goal"
    assert metric_count(saves.cost_vector(t)) == 1
    # the zero-cost check is a second distinct cost
    assert metric_count(plans[0].cost_vector(t)) == 2


def test_finance_large_target_one_cost_plan():
    t = gen_finance(FinanceSpec(1000, 4, ((100, 1), (250, 3), (500, 7))))
    plans = oracle.enumerate_simple_plans(t).plans
    uniform = [p for p in plans if set(p.cost_vector(t)) == {3, 0}]
    assert uniform
    best = oracle.lex_min(t, plans, "count", "dc")
    assert best[1][0] == 2


def test_finance_lex_optima_fixed():
    t = gen_finance(FinanceSpec(6, 3, ((1, 1), (2, 3), (3, 4))))
    plans = oracle.enumerate_simple_plans(t).plans
    got = {(m, o): oracle.lex_min(t, plans, m, o)[1] for m in ("count", "delta", "range") for o in ("cd", "dc")}
    assert got == {
        ("count", "cd"): (8, 2), ("count", "dc"): (2, 8),   # save 3 twice, then check
        ("delta", "cd"): (8, 2), ("delta", "dc"): (2, 8),   # costs 4, 3, 1, 0
        ("range", "cd"): (8, 4), ("range", "dc"): (3, 9),   # save 2 three times
    }


def test_finance_validation():
    with pytest.raises(InvalidSpec):
        FinanceSpec(4, 2, ((1, 3), (2, 1)))
    with pytest.raises(TargetUnreachable):
        gen_finance(FinanceSpec(10, 2, ((1, 1), (2, 2))))
    assert FinanceSpec(4, 2, ((2, 3), (1, 1))).levels == ((1, 1), (2, 3))


def test_seeded_rng(monkeypatch):
    monkeypatch.setenv("UNIPLAN_SEED", "42")
    a = seeded_rng().random()
    monkeypatch.setenv("UNIPLAN_SEED", "42")
    assert seeded_rng().random() == a
