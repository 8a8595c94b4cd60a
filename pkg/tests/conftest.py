import pytest

from idnc.model import new_system


@pytest.fixture
def toy():
    """Three users, four messages; user 1's Has set {1, 2} is the only one that
    reproduces the 9/7/10 schedule totals (see test_model)."""
    return new_system(4, [{1, 2}, {3}, {1, 3, 4}], [0.0, 0.0, 0.0])


def user(state, uid):
    return state.users[uid - 1]


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
