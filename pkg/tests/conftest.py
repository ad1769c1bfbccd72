import pytest

# criterion number -> (passed, one-line note), filled by test_acceptance
CRITERIA = {}


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(CRITERIA):
        ok, note = CRITERIA[k]
        terminalreporter.write_line("criterion %2d: %s  %s" % (k, "PASS" if ok else "FAIL", note))


@pytest.fixture(scope="session")
def criteria_log():
    return CRITERIA
