import time

import pytest

_ACCEPTANCE_LINES = []


class _Criterion:
    def __init__(self, number, title):
        self.number = number
        self.title = title
        self.start = time.perf_counter()

    def done(self, ok, detail="", limit=None):
        elapsed = time.perf_counter() - self.start
        in_time = limit is None or elapsed < limit
        tag = "PASS" if ok and in_time else "FAIL"
        budget = f" (limit {limit:g} s)" if limit is not None else ""
        line = f"[{tag}] criterion {self.number:>2}: {self.title}: {detail} [{elapsed:.2f} s{budget}]"
        _ACCEPTANCE_LINES.append((self.number, line))
        print(line)
        assert ok, line
        assert in_time, line


@pytest.fixture
def criterion():
    return _Criterion


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(_ACCEPTANCE_LINES):
        terminalreporter.write_line(line)
