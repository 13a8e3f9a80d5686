import pytest

from ceqss.acceptance import DEFAULT_SEED, Suite

_acceptance_lines: dict[int, str] = {}


@pytest.fixture(scope="session")
def acceptance_suite():
    return Suite(seed=DEFAULT_SEED)


@pytest.fixture(scope="session")
def acceptance_log():
    return _acceptance_lines


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_lines:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_acceptance_lines):
        terminalreporter.write_line(_acceptance_lines[number])
