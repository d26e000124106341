"""Collects acceptance-criterion outcomes and prints one line per criterion after the run."""

_ACCEPTANCE: list[tuple[str, str, str]] = []


def pytest_runtest_logreport(report):
    props = dict(report.user_properties)
    if "criterion" not in props:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        status = "PASS" if report.outcome == "passed" else "FAIL"
        _ACCEPTANCE.append((status, props["criterion"], props.get("measured", "")))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for status, name, measured in _ACCEPTANCE:
        terminalreporter.write_line(f"{status}  {name}" + (f"  [{measured}]" if measured else ""))
