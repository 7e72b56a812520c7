import pytest

# Collected pass/fail per acceptance criterion, printed as a summary so
# a plain `pytest` run shows one line per criterion.
_RESULTS: dict = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when != "call":
        return
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, title = marker.args
    entry = _RESULTS.setdefault(number, (title, []))
    entry[1].append(report.passed)


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for number in sorted(_RESULTS):
        title, passed = _RESULTS[number]
        status = "PASS" if passed and all(passed) else "FAIL"
        terminalreporter.write_line(f"criterion {number:>2}: {status}  {title}")
