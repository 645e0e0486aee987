import functools

import pytest

from newtontree.fixtures import all_fixtures
from newtontree.oracle import EnumBounds, enumerate_minimally_complete, enumerate_trees

SMALL = EnumBounds(3, 4, 3)


@functools.lru_cache(maxsize=None)
def population(max_vertices: int, max_arrows: int, max_dec: int) -> tuple:
    return tuple(enumerate_trees(EnumBounds(max_vertices, max_arrows, max_dec)))


@functools.lru_cache(maxsize=None)
def minimal_population(max_vertices: int = 6, max_arrows: int = 6, max_dec: int = 4) -> tuple:
    return tuple(enumerate_minimally_complete(EnumBounds(max_vertices, max_arrows, max_dec)))


def small_population() -> tuple:
    return population(SMALL.max_vertices, SMALL.max_arrows, SMALL.max_abs_decoration)


@pytest.fixture(scope="session")
def fixtures():
    return all_fixtures()


@pytest.fixture
def T0(fixtures):
    return fixtures["T0"]


@pytest.fixture
def T2(fixtures):
    return fixtures["T2"]


@pytest.fixture
def T3(fixtures):
    return fixtures["T3"]


@pytest.fixture
def T4(fixtures):
    return fixtures["T4"]


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
