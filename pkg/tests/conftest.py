import helpers


def pytest_terminal_summary(terminalreporter):
    if not helpers.ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, description, ok in sorted(helpers.ACCEPTANCE_RESULTS):
        status = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"{status} criterion {number}: {description}")
