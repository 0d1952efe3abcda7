"""Shared reporting: collect acceptance-gate lines and print them in the
terminal summary, where capture cannot swallow them."""

GATE_LINES = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if GATE_LINES:
        terminalreporter.write_sep("-", "acceptance checks")
        for line in GATE_LINES:
            terminalreporter.write_line(line)
