import pytest

from congalg.algebra import make_algebra
from congalg.qomega import make_qn

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def q2():
    return make_qn(2).algebra


@pytest.fixture(scope="session")
def q4():
    return make_qn(4).algebra


@pytest.fixture
def constant_map2():
    """Two elements, one unary operation sending both to 0."""
    return make_algebra(2, [("f", 1, [0, 0])])


@pytest.fixture
def semilattice2():
    return make_algebra(2, [("meet", 2, [0, 0, 0, 1])])


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
