import pytest

_criteria: dict[str, list[str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion reported in the summary")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or report.when != "call":
        return
    label = marker.args[0]
    _criteria.setdefault(label, []).append(report.outcome)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for label, outcomes in _criteria.items():
        passed = sum(o == "passed" for o in outcomes)
        status = "PASS" if passed == len(outcomes) else "FAIL"
        parts = f"  [{passed}/{len(outcomes)} cases]" if len(outcomes) > 1 else ""
        terminalreporter.write_line(f"{status}  {label}{parts}")
