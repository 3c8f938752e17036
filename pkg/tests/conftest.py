import os

import numpy as np
import pytest

DEFAULT_SEED = 20140408


def pytest_addoption(parser):
    parser.addoption("--seed", type=int, default=None, help="seed for randomized property tests")


@pytest.fixture(scope="session")
def seed(request) -> int:
    s = request.config.getoption("--seed")
    if s is None:
        s = int(os.environ.get("TORICSPLIT_TEST_SEED", DEFAULT_SEED))
    return s


@pytest.fixture
def rng(seed) -> np.random.Generator:
    return np.random.default_rng(seed)


def pytest_terminal_summary(terminalreporter):
    import sys

    for mod in list(sys.modules.values()):
        lines = getattr(mod, "pytest_terminal_summary_lines", None)
        if callable(lines) and getattr(mod, "RESULTS", None):
            terminalreporter.section("acceptance criteria")
            for line in lines():
                terminalreporter.write_line(line)
            break
