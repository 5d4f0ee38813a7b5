import numpy as np
import pytest

from opstat.manual import dichotomy_manual, tru_manual, validate_manual

ACCEPTANCE_LINES = []


@pytest.fixture
def nine():
    return dichotomy_manual()


@pytest.fixture
def tru3():
    return tru_manual()


@pytest.fixture
def triangle():
    return validate_manual([["T_T", "R_T", "U_T"]])


@pytest.fixture
def rng():
    return np.random.default_rng(20261017)


@pytest.fixture
def record():
    """Record one acceptance line; printed in the terminal summary."""

    def _record(name, ok, detail=""):
        ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}".rstrip())
        assert ok, f"{name}: {detail}"

    return _record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
