import time

import pytest

# acceptance criteria started during this session: number -> (title, limit, seconds, nodeid)
_criteria = {}


@pytest.fixture
def criterion(request):
    """Call as ``criterion(number, title, limit_seconds)`` at the top of an acceptance test.

    The wall time from that call to the end of the test is recorded and a
    PASS/FAIL line per criterion is printed in the terminal summary.
    """
    started = {}

    def start(number, title, limit):
        started.update(number=number, title=title, limit=limit, t0=time.perf_counter())

    yield start
    if started:
        seconds = time.perf_counter() - started["t0"]
        _criteria[started["number"]] = (started["title"], started["limit"], seconds, request.node.nodeid)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    passed = {r.nodeid for r in terminalreporter.stats.get("passed", []) if r.when == "call"}
    terminalreporter.write_sep("=", "acceptance criteria")
    for number in sorted(_criteria):
        title, limit, seconds, nodeid = _criteria[number]
        status = "PASS" if nodeid in passed else "FAIL"
        terminalreporter.write_line(f"criterion {number:2d}: {status}  {seconds:8.2f}s  (limit {limit}s)  {title}")
