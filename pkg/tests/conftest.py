import pytest

ACCEPTANCE = {}


@pytest.fixture
def criterion():
    """Record a pass/fail line for an acceptance criterion, then assert it."""

    def record(number, description, ok, detail=""):
        ACCEPTANCE[number] = (description, bool(ok), detail)
        assert ok, f"criterion {number} failed: {description} ({detail})"

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        description, ok, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {number:>2}. {description} -- {detail}")
