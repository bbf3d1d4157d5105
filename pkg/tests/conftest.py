import os

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", max_examples=1000, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


_REPORT = pytest.StashKey[list]()


@pytest.fixture
def report(request):
    """Collect a line for the acceptance summary at the end of the run."""
    lines = request.config.stash.setdefault(_REPORT, [])

    def add(line):
        print(line)
        lines.append(line)

    return add


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_REPORT, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(set(lines), key=lambda s: int(s.split(":")[0].split()[1])):
            terminalreporter.write_line(line)
