"""Dispersion metrics over plan action-cost vectors."""
from __future__ import annotations

import math
from typing import NamedTuple, Sequence

METRICS = ("count", "delta", "range")


class EmptyVector(ValueError):
    pass


def metric_count(costs: Sequence[int]) -> int:
    """Number of distinct action costs."""
    return len(set(costs))


def metric_delta(costs: Sequence[int]) -> int:
    """Largest jump between adjacent action costs; 0 for fewer than two actions."""
    return max((abs(a - b) for a, b in zip(costs, costs[1:])), default=0)


def metric_range(costs: Sequence[int]) -> int:
    if not costs:
        return 0
    return max(costs) - min(costs)


def metric_stddev(costs: Sequence[int]) -> float:
    """Population standard deviation."""
    if not costs:
        raise EmptyVector("standard deviation of an empty cost vector")
    mean = sum(costs) / len(costs)
    return math.sqrt(sum((c - mean) ** 2 for c in costs) / len(costs))


_BY_NAME = {"count": metric_count, "delta": metric_delta, "range": metric_range}


def dispersion(metric: str, costs: Sequence[int]) -> int:
    try:
        fn = _BY_NAME[metric]
    except KeyError:
        raise ValueError(f"unknown metric {metric!r}") from None
    return fn(costs)


class MetricReport(NamedTuple):
    cost: int
    count: int
    delta: int
    range: int
    stddev: float

    @classmethod
    def of(cls, costs: Sequence[int]) -> "MetricReport":
        costs = tuple(costs)
        return cls(
            cost=sum(costs),
            count=metric_count(costs),
            delta=metric_delta(costs),
            range=metric_range(costs),
            stddev=metric_stddev(costs) if costs else 0.0,
        )
