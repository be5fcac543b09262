"""Collects acceptance-criterion outcomes for a one-line-per-criterion summary."""

import pytest

_CRITERIA: dict[str, str] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    key = marker.args[0]
    if report.when == "call" or report.failed:
        failed = report.failed or _CRITERIA.get(key, "").startswith("FAIL")
        _CRITERIA[key] = ("FAIL" if failed else "PASS") + f"  {key}"


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(name): acceptance criterion identifier")


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_CRITERIA, key=lambda k: int(k.split(".")[0])):
        terminalreporter.write_line(_CRITERIA[key])
