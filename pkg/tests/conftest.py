import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "helmscat",
    deadline=None,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("helmscat")

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def bundled(tmp_path_factory):
    """Run a bundled config once per session: ``bundled("table1") -> RunReport``."""
    from helmscat.cli import run
    from helmscat.config import load_config

    root = tmp_path_factory.mktemp("bundled")
    cache = {}

    def get(name):
        if name not in cache:
            cache[name] = run(load_config(name), root / name)
        return cache[name]

    return get
