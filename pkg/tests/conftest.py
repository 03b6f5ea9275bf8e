import pytest

from hamcubic import named

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def k4():
    return named.k4()


@pytest.fixture
def prism():
    return named.prism()


@pytest.fixture
def k33():
    return named.k33()


@pytest.fixture
def petersen():
    return named.petersen()


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
