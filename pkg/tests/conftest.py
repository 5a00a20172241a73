import numpy as np
import pytest

from shiftinv.generators import BumpSpec, build_generators
from shiftinv.signal import Grid


@pytest.fixture(scope="session")
def grid():
    return Grid.window(128, "1/256")


@pytest.fixture(scope="session")
def gens012(grid):
    return build_generators((0, 1, 2), BumpSpec(), grid)


@pytest.fixture(scope="session")
def gens02(grid):
    return build_generators((0, 2), BumpSpec(), grid)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
