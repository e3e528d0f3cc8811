"""Acceptance reporting: one PASS/FAIL line per criterion at the end of the run."""

import pytest

_OUTCOMES: dict[str, list] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(name): acceptance criterion this test gates")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or report.when not in ("setup", "call"):
        return
    if report.when == "setup" and report.passed:
        return
    name = marker.args[0]
    detail = "; ".join(str(v) for k, v in item.user_properties if k == "detail")
    entry = _OUTCOMES.setdefault(name, [True, []])
    entry[0] = entry[0] and report.passed
    if detail:
        entry[1].append(detail)


def pytest_terminal_summary(terminalreporter):
    if not _OUTCOMES:
        return
    terminalreporter.section("acceptance criteria")
    for name, (ok, details) in _OUTCOMES.items():
        line = f"{'PASS' if ok else 'FAIL'}  {name}"
        if details:
            line += "  [" + "; ".join(details) + "]"
        terminalreporter.write_line(line)
