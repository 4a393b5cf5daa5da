"""Shared test plumbing: the acceptance-criteria summary lines.

Tests marked `@pytest.mark.criterion(num, "title")` feed a per-criterion
verdict table printed after the run, one line per criterion, so the gate
can be read without scrolling the full test log.  A criterion passes only
if every test carrying its marker passed.
"""

import pytest


def pytest_configure(config):
    config.addinivalue_line(
        "markers",
        "criterion(num, title): ties a test to one numbered acceptance criterion",
    )
    config._criterion_titles = {}
    config._criterion_verdicts = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    num, title = marker.args
    config = item.config
    config._criterion_titles[num] = title
    verdicts = config._criterion_verdicts.setdefault(num, [])
    if rep.when == "call":
        verdicts.append(rep.passed)
    elif rep.failed or rep.skipped:
        # setup/teardown errors and skips both mean the criterion never ran
        verdicts.append(False)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    titles = getattr(config, "_criterion_titles", {})
    if not titles:
        return
    verdicts = config._criterion_verdicts
    terminalreporter.section("acceptance criteria")
    for num in sorted(titles):
        results = verdicts.get(num, [])
        ok = bool(results) and all(results)
        word = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"criterion {num:2d} [{word}] {titles[num]}")
