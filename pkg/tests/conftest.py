import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "dgakit",
    max_examples=200,
    derandomize=True,  # fixed seed: the same cases on every run
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
    print_blob=True,
)
settings.load_profile("dgakit")


@pytest.fixture(scope="session")
def entries():
    from dgakit.catalog import catalog
    return {e.id: e for e in catalog()}


ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
