import time

import pytest

_RESULTS = []
_START = {}

SUITE_BUDGET_S = 300.0


def pytest_sessionstart(session):
    _START["t"] = time.perf_counter()


@pytest.fixture
def acceptance_report(capsys):
    """Record and print one PASS/FAIL line for an acceptance criterion."""

    def report(name, passed, detail):
        line = f"[acceptance] {name}: {'PASS' if passed else 'FAIL'} -- {detail}"
        _RESULTS.append(line)
        with capsys.disabled():
            print("\n" + line)
        return passed

    return report


def pytest_terminal_summary(terminalreporter):
    elapsed = time.perf_counter() - _START.get("t", time.perf_counter())
    if _RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in _RESULTS:
            terminalreporter.write_line(line)
    ok = elapsed < SUITE_BUDGET_S
    terminalreporter.write_line(
        f"[acceptance] suite wall time: {elapsed:.1f} s (budget {SUITE_BUDGET_S:.0f} s): {'PASS' if ok else 'FAIL'}"
    )
