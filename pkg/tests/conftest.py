import pytest

from polylist.setmodel import Budget, FinSet


@pytest.fixture
def X2():
    return FinSet(("a", "b"), "X")


@pytest.fixture
def X3():
    return FinSet(("a", "b", "c"), "X")


@pytest.fixture
def small():
    return Budget(nat_max=4, len_max=3)


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def verdict():
    """Record one acceptance line; printed again in the terminal summary."""

    def record(number: int, title: str, ok: bool, detail: str = ""):
        line = f"criterion {number:2d} {title}: {'PASS' if ok else 'FAIL'}" + (f" ({detail})" if detail else "")
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
