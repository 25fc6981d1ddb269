import re
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

_CRITERIA = {}
_PATTERN = re.compile(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)")


def pytest_runtest_logreport(report):
    m = _PATTERN.search(report.nodeid)
    if not m:
        return
    key = (int(m.group(1)), m.group(2))
    if report.when == "call" or report.failed:
        if report.failed or key not in _CRITERIA:
            _CRITERIA[key] = "FAIL" if report.failed else "PASS"


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for (num, name), outcome in sorted(_CRITERIA.items()):
        terminalreporter.write_line(f"criterion {num:2d} {name.replace('_', ' '):<28} {outcome}")
