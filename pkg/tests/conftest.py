import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

criterion_lines = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[criterion_lines] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(criterion_lines, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
