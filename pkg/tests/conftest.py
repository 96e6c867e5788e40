import time

import pytest

_LINES = []


class Criterion:
    def __init__(self, number, title, limit):
        self.number, self.title, self.limit = number, title, limit
        self.start = time.perf_counter()
        self.notes = []

    def note(self, text):
        self.notes.append(text)

    def finish(self, ok):
        elapsed = time.perf_counter() - self.start
        in_time = elapsed < self.limit
        status = "PASS" if ok and in_time else "FAIL"
        line = "criterion %2d %-4s %s (%.2fs, limit %gs)" % (self.number, status, self.title,
                                                             elapsed, self.limit)
        if not in_time:
            line += " over time limit"
        if self.notes:
            line += "; " + "; ".join(self.notes)
        _LINES.append((self.number, line))
        print(line)
        return ok and in_time


@pytest.fixture
def criterion():
    return Criterion


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(_LINES):
            terminalreporter.write_line(line)
