import random

import pytest

from debtnet import scenarios

# acceptance outcomes collected for the terminal summary
_ACCEPTANCE: dict[str, str] = {}


@pytest.fixture(scope="session", autouse=True)
def scenarios_verified():
    """Abort the run if any named instance drifts from its recorded facts."""
    failures = {name: scenarios.verify(name) for name in scenarios.SCENARIOS}
    failures = {k: v for k, v in failures.items() if v}
    if failures:
        pytest.exit(f"scenario verification failed: {failures}", returncode=1)


@pytest.fixture
def rng():
    return random.Random(1234)


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    if "test_acceptance.py::test_criterion_" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    _ACCEPTANCE[name] = "PASS" if report.outcome == "passed" else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_ACCEPTANCE, key=lambda s: int(s.split("_")[2])):
        terminalreporter.write_line(f"{_ACCEPTANCE[name]}  {name}")
