"""Shared pytest plumbing: surface the acceptance verdict lines.

The acceptance tests register a one-line verdict per criterion; this hook
prints them after the run so they survive output capture.
"""

acceptance_lines = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_lines:
            terminalreporter.write_line(line)
