import os
import sys

# make the shared oracle helpers importable from every test module
sys.path.insert(0, os.path.dirname(__file__))


def pytest_terminal_summary(terminalreporter):
    """Re-emit the acceptance criterion lines that stdout capture swallowed."""
    lines = []
    for reports in terminalreporter.stats.values():
        for rep in reports:
            if getattr(rep, "when", None) != "call":
                continue
            cap = getattr(rep, "capstdout", "")
            lines.extend(
                ln for ln in cap.splitlines() if ln.startswith("criterion ")
            )
    if lines:
        terminalreporter.section("acceptance criteria")
        for ln in sorted(set(lines)):
            terminalreporter.line(ln)
