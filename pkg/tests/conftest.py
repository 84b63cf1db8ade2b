import pytest

_CRITERIA = pytest.StashKey[dict]()


def pytest_configure(config):
    config.stash[_CRITERIA] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, title = marker.args
    results = item.config.stash[_CRITERIA]
    failed = report.failed or (report.when == "call" and report.skipped)
    if failed or report.when == "call":
        prev = results.get(number, (title, True))[1]
        results[number] = (title, prev and not failed)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = config.stash[_CRITERIA]
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        title, ok = results[number]
        terminalreporter.write_line(f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {title}")
