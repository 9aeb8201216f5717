"""Collect acceptance outcomes and print one line per criterion at the end."""

import re
from collections import OrderedDict

_CRITERIA = OrderedDict()
_PATTERN = re.compile(r"test_criterion_(\d+)([a-z]?)_")


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    m = _PATTERN.match(name)
    if not m:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        number, part = int(m.group(1)), m.group(2)
        entry = _CRITERIA.setdefault(number, [])
        entry.append((part or "-", report.outcome == "passed"))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        parts = _CRITERIA[number]
        ok = all(passed for _, passed in parts)
        detail = ", ".join(f"{p}:{'ok' if passed else 'FAIL'}" for p, passed in parts
                           if p != "-")
        line = f"{'PASS' if ok else 'FAIL'} criterion {number}"
        terminalreporter.write_line(line + (f" ({detail})" if detail else ""))
