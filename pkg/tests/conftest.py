import sys


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    # replay the acceptance verdicts after the capture machinery is done,
    # so the per-criterion lines survive a plain `pytest -v` run
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "VERDICT_LINES", ()) if mod else ()
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
