from fractions import Fraction

import pytest
import sympy

from tetravol.exact import random_configuration

ACCEPTANCE_LINES = []


def sympy_volume(config, labels):
    """Independent oracle: sympy determinant of the 4x4 homogeneous matrix."""
    rows = [[1] + [sympy.Rational(c.numerator, c.denominator) for c in config.points[i]]
            for i in labels]
    det = sympy.Matrix(rows).det()
    return Fraction(int(det.p), int(det.q)) / 6


@pytest.fixture
def configs():
    return [random_configuration(6, 1000, 1000 + k) for k in range(10)]


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
