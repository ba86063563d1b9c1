import pytest

from builders import fix_a

_criteria = {}


@pytest.fixture
def fix_a_graph():
    return fix_a()


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, title = marker.args
    failed = report.failed
    if report.when == "call" or failed:
        _criteria[(number, item.name)] = (title, "FAIL" if failed else "PASS")


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for (number, name), (title, status) in sorted(_criteria.items()):
        terminalreporter.write_line(f"{status} criterion {number}: {title} [{name}]")
