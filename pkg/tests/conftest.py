import dataclasses

import numpy as np
import pytest

from msde.problems import Problem, get


class CountingObjective:
    """Wraps a batch objective and counts every row it is asked to evaluate."""

    def __init__(self, function):
        self.function = function
        self.rows = 0
        self.calls = 0

    def __call__(self, X):
        self.calls += 1
        self.rows += len(X)
        return self.function(X)


def counted(problem):
    wrapper = CountingObjective(problem.function)
    return dataclasses.replace(problem, function=wrapper), wrapper


@pytest.fixture
def sphere():
    return Problem("sphere", 5, -5.0, 5.0, lambda X: np.sum(X**2, axis=1), 0.0, 1e-8)


@pytest.fixture
def hosaki():
    return get("f6")


@pytest.fixture
def rng():
    return np.random.default_rng(2024)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
