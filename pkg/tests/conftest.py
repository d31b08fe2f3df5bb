import pytest

from thetametric import bundled_fixtures, make_action

ACCEPTANCE_LINES = []


@pytest.fixture
def paper3():
    return bundled_fixtures()["paper-3pt"].build_space()


@pytest.fixture
def remark():
    return bundled_fixtures()["remark-metric"].build_space()


@pytest.fixture
def plus():
    return make_action("k_sum", k=1.0)


@pytest.fixture
def plus_prod():
    return make_action("sum_plus_prod")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
