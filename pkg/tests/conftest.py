import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from benchmeans import load_fixture  # noqa: E402


@pytest.fixture(scope="session")
def superglue():
    return load_fixture("superglue")


@pytest.fixture(scope="session")
def glue():
    return load_fixture("glue")


@pytest.fixture(scope="session")
def xtreme():
    return load_fixture("xtreme")


@pytest.fixture(scope="session")
def xglue_nlu():
    return load_fixture("xglue_nlu")


@pytest.fixture(scope="session")
def xglue_nlg():
    return load_fixture("xglue_nlg")


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")
    config._criteria = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or not (report.when == "call" or report.failed):
        return
    number, title = marker.args
    item.config._criteria.setdefault(number, []).append((title, report.outcome))


def pytest_terminal_summary(terminalreporter, config):
    criteria = getattr(config, "_criteria", {})
    if not criteria:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number in sorted(criteria):
        parts = criteria[number]
        ok = all(outcome == "passed" for _, outcome in parts)
        tr.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {number}")
        for title, outcome in parts:
            tr.write_line(f"    {outcome:<6} {title}")
    module = sys.modules.get("test_acceptance")
    for note in getattr(module, "NOTES", []):
        tr.write_line(f"note: {note}")
