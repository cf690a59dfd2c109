import re

_CRITERION = re.compile(r"^(PASS|FAIL) criterion\s+\d+:")
_lines: list[str] = []


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance" in report.nodeid:
        _lines.extend(ln for ln in report.capstdout.splitlines() if _CRITERION.match(ln))


def pytest_terminal_summary(terminalreporter):
    if _lines:
        terminalreporter.section("acceptance criteria")
        for ln in sorted(_lines, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(ln)
