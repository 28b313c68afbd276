import os
import sys

sys.path.insert(0, os.path.dirname(__file__))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    from test_acceptance import format_result

    terminalreporter.section("acceptance criteria")
    for row in sorted(results):
        terminalreporter.write_line(format_result(*row))
