from __future__ import annotations

import pytest

from uniplan.domains import DEMO_NAV, gen_navigation
from uniplan.fixtures import fixture_suite
from uniplan.task import make_task


@pytest.fixture(scope="session")
def suite():
    return fixture_suite()


@pytest.fixture(scope="session")
def demo_task():
    return gen_navigation(DEMO_NAV)


@pytest.fixture
def chain3():
    """Three-cell corridor: two moves, both cost 2."""
    return make_task(
        ["c0", "c1", "c2"],
        [
            {"name": "m01", "pre": ["c0"], "add": ["c1"], "del": ["c0"], "cost": 2},
            {"name": "m12", "pre": ["c1"], "add": ["c2"], "del": ["c1"], "cost": 2},
        ],
        ["c0"],
        ["c2"],
    )


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(RESULTS):
            terminalreporter.write_line(line)
