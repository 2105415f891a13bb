ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    """Echo the per-criterion acceptance verdicts after the run."""
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
