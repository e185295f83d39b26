"""Shared pytest wiring.

The acceptance tests append one verdict line each to ``acceptance_lines``;
the terminal-summary hook replays them in a dedicated block so the verdicts
stay visible even though pytest captures per-test stdout.
"""

acceptance_lines: list = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_lines:
            terminalreporter.write_line(line)
