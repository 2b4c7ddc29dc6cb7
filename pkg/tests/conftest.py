import sys


def pytest_terminal_summary(terminalreporter):
    for mod in list(sys.modules.values()):
        results = getattr(mod, "RESULTS", None)
        if getattr(mod, "__name__", "").endswith("test_acceptance") and results:
            terminalreporter.section("acceptance criteria")
            for k in sorted(results):
                terminalreporter.write_line(results[k])
