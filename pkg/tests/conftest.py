import os

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", max_examples=300, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

CRITERIA = pytest.StashKey[dict]()


def pytest_configure(config):
    config.stash[CRITERIA] = {}


@pytest.fixture
def criterion(request):
    """Record a numbered acceptance verdict for the end-of-run table."""
    table = request.config.stash[CRITERIA]

    def record(number, label, ok):
        table[number] = (label, bool(ok))
        return ok

    return record


def pytest_terminal_summary(terminalreporter, config):
    table = config.stash.get(CRITERIA, {})
    if not table:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(table):
        label, ok = table[number]
        terminalreporter.write_line("%s  %2d  %s" % ("PASS" if ok else "FAIL", number, label))
