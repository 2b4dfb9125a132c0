import json
from fractions import Fraction
from pathlib import Path

import pytest

from steklov.fixtures import half_line_window, star_window

FROZEN = json.loads(Path(__file__).with_name("frozen.json").read_text())


def fval(pair):
    return float(Fraction(*pair))


@pytest.fixture
def frozen():
    return FROZEN


@pytest.fixture
def star():
    return star_window()


@pytest.fixture
def half01():
    return half_line_window(2)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS, format_line
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(RESULTS):
        terminalreporter.write_line(format_line(number, *RESULTS[number]))
