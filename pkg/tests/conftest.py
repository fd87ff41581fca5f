import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

# criterion number -> (label, outcome, seconds)
_results: dict[int, tuple[str, str, float]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is not None:
        report.criterion = mark.args


def pytest_runtest_logreport(report):
    marker = getattr(report, "criterion", None)
    if marker is None or report.when == "teardown":
        return
    if report.when == "setup" and report.passed:
        return
    number, label = marker
    outcome = "pass" if report.passed else ("skip" if report.skipped else "FAIL")
    _results[number] = (label, outcome, report.duration)


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_results):
        label, outcome, secs = _results[number]
        terminalreporter.write_line(f"[{outcome}] {number:2d}. {label} ({secs:.1f}s)")
