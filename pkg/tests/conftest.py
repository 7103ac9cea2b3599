import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))  # for the kbgen helper

from arguide.bundled import case_study_kb, excerpt_kb


@pytest.fixture(scope="session")
def excerpt():
    return excerpt_kb()


@pytest.fixture(scope="session")
def case_study():
    return case_study_kb()


@pytest.fixture()
def manager(excerpt):
    from arguide.dialogue import SessionManager

    return SessionManager(excerpt)


# One summary line per acceptance criterion at the end of the run.

_acceptance_results: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if report.when == "call":
        _acceptance_results[name] = report.outcome
    elif report.when == "setup" and report.outcome != "passed":
        _acceptance_results[name] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_results:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for name in sorted(_acceptance_results):
        outcome = _acceptance_results[name]
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{verdict}  {name}")
