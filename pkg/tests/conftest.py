import os
import sys
import time
from contextlib import contextmanager

import pytest

sys.path.insert(0, os.path.dirname(__file__))

_CRITERIA = {}


class Criterion:
    """Times one acceptance criterion and records a pass/fail line for it."""

    def __init__(self, number, title, limit):
        self.number, self.title, self.limit = number, title, limit
        self.runs = []

    @contextmanager
    def run(self, label, limit):
        """A sub-run with its own time limit."""
        start = time.perf_counter()
        yield
        took = time.perf_counter() - start
        self.runs.append((label, took))
        assert took < limit, f"{label} took {took:.1f}s, limit {limit}s"


@pytest.fixture
def criterion():
    @contextmanager
    def open_criterion(number, title, limit):
        c = Criterion(number, title, limit)
        start = time.perf_counter()
        status, detail = "FAIL", ""
        try:
            yield c
            took = time.perf_counter() - start
            assert took < limit, f"took {took:.1f}s, limit {limit}s"
            status = "PASS"
        except BaseException as exc:
            detail = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
            raise
        finally:
            took = time.perf_counter() - start
            _CRITERIA[number] = (status, title, took, limit, detail)

    return open_criterion


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        status, title, took, limit, detail = _CRITERIA[number]
        line = f"{status} criterion {number:2d}: {title} ({took:.1f}s of {limit}s)"
        if detail:
            line += f" -- {detail}"
        terminalreporter.write_line(line)
