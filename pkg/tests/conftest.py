"""Shared pytest wiring: per-criterion summary lines for the acceptance suite."""


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    outcomes: dict[str, str] = {}
    for status, verdict in (("passed", "PASS"), ("failed", "FAIL"), ("error", "FAIL")):
        for rep in terminalreporter.stats.get(status, []):
            nodeid = getattr(rep, "nodeid", "")
            if "test_acceptance.py" not in nodeid:
                continue
            if status == "passed" and getattr(rep, "when", "call") != "call":
                continue
            name = nodeid.split("::")[-1]
            if verdict == "FAIL" or name not in outcomes:
                outcomes[name] = verdict
    if not outcomes:
        return
    terminalreporter.write_line("")
    terminalreporter.write_line("acceptance criteria:")
    for name in sorted(outcomes):
        label = name.removeprefix("test_").replace("_", " ")
        terminalreporter.write_line(f"  {outcomes[name]}  {label}")
