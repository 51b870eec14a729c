import math

import pytest

from mrqubit import PhysicsConfig


@pytest.fixture
def water():
    """3 T water bar: T1 = 4 s, T2 = T1/2, 10 mT/m gradient."""
    return PhysicsConfig(t1=4.0, t2=2.0)


@pytest.fixture
def no_relax():
    return PhysicsConfig(t1=math.inf, t2=math.inf)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    setattr(item, f"rep_{rep.when}", rep)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in RESULTS:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")
