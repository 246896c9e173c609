import time

import pytest

ACCEPTANCE = {}
_START = {}


def pytest_sessionstart(session):
    _START["t"] = time.perf_counter()


def session_elapsed() -> float:
    return time.perf_counter() - _START.get("t", time.perf_counter())


@pytest.fixture
def criterion(request):
    """Record one acceptance line: ``criterion(n, text)`` before asserting."""
    entry = {}

    def register(number, text):
        entry.update(number=number, text=text)

    yield register
    if entry:
        rep = getattr(request.node, "rep_call", None)
        ACCEPTANCE[entry["number"]] = (entry["text"], rep is not None and rep.passed)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    total = session_elapsed()
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        text, ok = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {text}")
    terminalreporter.write_line(f"session wall time {total:.1f} s (limit 60 s): "
                                f"{'PASS' if total < 60 else 'FAIL'}")
