import re

import pytest

from magnusbound.coefficients import nu_recursive

_CRITERION_PATTERN = re.compile(r"test_acceptance\.py::test_criterion_(\d+)")


@pytest.fixture(scope="session")
def table24():
    """Exact order coefficients through n = 24, shared across test modules."""
    return nu_recursive(24)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One pass/fail line per acceptance criterion, visible regardless of
    output capturing."""
    found = {}
    for outcome, label in (("passed", "PASS"), ("failed", "FAIL"), ("error", "FAIL")):
        for report in terminalreporter.stats.get(outcome, []):
            match = _CRITERION_PATTERN.search(getattr(report, "nodeid", ""))
            if match is None:
                continue
            number = int(match.group(1))
            detail = dict(getattr(report, "user_properties", ())).get("detail", "")
            found[number] = (label, detail)
    if not found:
        return
    terminalreporter.write_line("")
    terminalreporter.write_line("acceptance criteria")
    for number in sorted(found):
        label, detail = found[number]
        suffix = f" ({detail})" if detail else ""
        terminalreporter.write_line(f"criterion {number}: {label}{suffix}")
