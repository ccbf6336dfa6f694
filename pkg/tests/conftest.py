import re

_CRITERIA: dict[int, tuple[str, str]] = {}
_PATTERN = re.compile(r"test_criterion_(\d+)_(\w+)")


def pytest_runtest_logreport(report):
    match = _PATTERN.search(report.nodeid)
    if not match or "test_acceptance" not in report.nodeid:
        return
    number, name = int(match.group(1)), match.group(2)
    failed = report.failed
    if report.when == "call" or failed or report.skipped:
        previous = _CRITERIA.get(number)
        if previous and previous[1] == "FAIL":
            return
        _CRITERIA[number] = (name.replace("_", " "), "FAIL" if failed or report.skipped else "PASS")


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        name, status = _CRITERIA[number]
        terminalreporter.write_line(f"{status} criterion {number:2d}: {name}")
