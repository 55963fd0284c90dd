import pytest

# (number, passed, summary) tuples recorded by test_acceptance.py
CRITERIA = []


@pytest.fixture
def record_criterion():
    def record(number, passed, summary):
        line = f"{'PASS' if passed else 'FAIL'} criterion {number}: {summary}"
        print(line)
        CRITERIA.append((number, passed, line))
        return passed
    return record


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for _, _, line in sorted(CRITERIA):
        terminalreporter.write_line(line)
