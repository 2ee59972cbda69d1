import math

import numpy as np
import pytest

from altapprox.operators import funcspec

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def grid101():
    return np.linspace(0.0, 1.0, 101)


@pytest.fixture
def grid2001():
    return np.linspace(0.0, 1.0, 2001)


def sin_half_pi():
    return funcspec(lambda x: np.sin(np.pi * x / 2), lambda x: np.pi / 2 * np.cos(np.pi * x / 2), "sin(pi x/2)")


def sin_pi():
    return funcspec(lambda x: np.sin(np.pi * x), lambda x: np.pi * np.cos(np.pi * x), "sin(pi x)")


def one_minus_sin_pi():
    return funcspec(lambda x: 1 - np.sin(np.pi * x), lambda x: -np.pi * np.cos(np.pi * x), "1 - sin(pi x)")


def log1p():
    return funcspec(np.log1p, lambda x: 1 / (1 + x), "ln(1+x)")


def sqrt_fn():
    return funcspec(np.sqrt, lambda x: 0.5 / np.sqrt(x), "sqrt(x)", endpoint_singular=True)


def monomial(m):
    return funcspec(lambda x: x ** m, lambda x: m * x ** (m - 1), f"x^{m}")


LN2 = math.log(2)
PI = math.pi
