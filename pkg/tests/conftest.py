import pytest

_LINES = []


@pytest.fixture
def accept_line(capsys):
    """Print a line live (outside capture) and repeat it in the final summary."""
    def emit(line):
        _LINES.append(line)
        with capsys.disabled():
            print("\n" + line, flush=True)
    return emit


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance")
        for line in _LINES:
            terminalreporter.write_line(line)
