import time
from contextlib import contextmanager

import pytest

_LINES: list[str] = []


@pytest.fixture
def criterion():
    """Time a block, enforce its runtime budget and record a PASS/FAIL line."""
    @contextmanager
    def run(label: str, budget: float):
        t0 = time.perf_counter()
        status = "FAIL"
        try:
            yield
            elapsed = time.perf_counter() - t0
            if elapsed > budget:
                raise AssertionError(f"{label}: {elapsed:.1f}s exceeds budget {budget:.0f}s")
            status = "PASS"
        finally:
            elapsed = time.perf_counter() - t0
            line = f"{status} {label} ({elapsed:.2f}s, budget {budget:.0f}s)"
            _LINES.append(line)
            print(line)
    return run


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in _LINES:
            terminalreporter.write_line(line)
