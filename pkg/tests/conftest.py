import os

from hypothesis import HealthCheck, settings

settings.register_profile(
    "default",
    max_examples=int(os.environ.get("MAGINT_HYPOTHESIS_EXAMPLES", "25")),
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


# -- acceptance reporting -------------------------------------------------------

import pytest

_CRITERIA = pytest.StashKey[dict]()


class Criterion:
    """Named sub-checks of one acceptance criterion, summarised in one line."""

    def __init__(self, number, title):
        self.number, self.title = number, title
        self.checks = []

    def check(self, name, value, ok):
        self.checks.append((name, value, bool(ok)))
        return ok

    def require(self):
        bad = [f"{n} = {v:.3g}" if isinstance(v, float) else f"{n} = {v}" for n, v, ok in self.checks if not ok]
        assert not bad, f"criterion {self.number} failed: " + "; ".join(bad)


@pytest.fixture
def criterion(request):
    made = []

    def make(number, title):
        c = Criterion(number, title)
        made.append(c)
        return c

    yield make
    book = request.config.stash.setdefault(_CRITERIA, {})
    for c in made:
        entry = book.setdefault(c.number, (c.title, []))
        entry[1].extend(c.checks)


def _fmt(v):
    return f"{v:.3g}" if isinstance(v, float) else str(v)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    book = config.stash.get(_CRITERIA, None)
    if not book:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(book):
        title, checks = book[number]
        status = "PASS" if checks and all(ok for _, _, ok in checks) else "FAIL"
        terminalreporter.write_line(f"criterion {number} {status}: {title}")
        for name, value, ok in checks:
            terminalreporter.write_line(f"    [{'ok' if ok else 'FAIL'}] {name}: {_fmt(value)}")
