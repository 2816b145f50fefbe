import _report


def pytest_terminal_summary(terminalreporter):
    if not _report.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_report.RESULTS):
        for _, line in _report.RESULTS[number]:
            terminalreporter.write_line(line)
