import pytest

from rauzylab.construction import Construction

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def con201():
    """Blocks 0..201 with the default tail window; enough for windows up to n = 201."""
    return Construction(201)


@pytest.fixture(scope="session")
def con100():
    return Construction(100)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
