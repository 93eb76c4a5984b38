from fractions import Fraction as F

import pytest

from atomcauchy import EulerEquation, parse

ORDER8 = ("9", "-9", "9/2", "-3/2", "3309/4", "3345/4", "1007/4", "28", "1")
ORDER5 = ("-3", "3", "-21/2", "19/2", "17/2", "1")
QUARTIC = ("-3", "3", "-9/2", "7/2", "1")

ORDER8_ROOTS = [F(-3), F(-2), F(-1), F(-1, 2), F(1, 2), F(1), F(2), F(3)]
ORDER5_ROOTS = [F(-2), F(-1), F(1, 2), F(1), F(3)]
QUARTIC_ROOTS = [F(-2), F(1, 2), F(1), F(3)]


@pytest.fixture
def order8():
    return EulerEquation(ORDER8), parse("x^4*ln(x)")


@pytest.fixture
def order5():
    return EulerEquation(ORDER5), parse("x^8*sin(x)")


@pytest.fixture
def quartic():
    return EulerEquation(QUARTIC)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
