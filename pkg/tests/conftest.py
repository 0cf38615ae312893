"""Prints one ACCEPTANCE line per criterion at the end of the run."""

import re

_results: dict[int, tuple[str, str]] = {}


def pytest_runtest_logreport(report):
    m = re.search(r"test_criterion_(\d+)", report.nodeid)
    if not m:
        return
    n = int(m.group(1))
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        detail = dict(report.user_properties).get("detail", "")
        status = "PASS" if report.outcome == "passed" else "FAIL"
        prev = _results.get(n)
        if prev is None or prev[0] == "PASS":
            _results[n] = (status, detail)


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_results):
        status, detail = _results[n]
        terminalreporter.write_line(f"ACCEPTANCE criterion {n}: {status}  {detail}".rstrip())
