import numpy as np
import pytest

ACCEPTANCE_LINES = {}


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def criterion_line():
    """Record the one-line outcome of an acceptance criterion."""

    def record(number, passed, text):
        line = f"criterion {number:>2}: {'PASS' if passed else 'FAIL'}  {text}"
        ACCEPTANCE_LINES[number] = line
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[n])
