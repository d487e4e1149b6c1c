import sys
from pathlib import Path

import pytest
from hypothesis import settings

sys.path.insert(0, str(Path(__file__).parent))

from dmiat import bundled_dataset, stratified_kfold  # noqa: E402

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion check")


@pytest.fixture(scope="session")
def glass():
    return bundled_dataset("glass")


@pytest.fixture(scope="session")
def iris():
    return bundled_dataset("iris")


@pytest.fixture(scope="session")
def glass_folds(glass):
    return stratified_kfold(glass, 10, 7)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or report.when != "call" and not report.failed:
        return
    n, title = mark.args
    ok = report.passed if report.when == "call" else False
    prev = _criteria.get(n, (title, []))
    prev[1].append((item.name, ok))
    _criteria[n] = prev


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        title, checks = _criteria[n]
        status = "PASS" if all(ok for _, ok in checks) else "FAIL"
        failed = [name for name, ok in checks if not ok]
        extra = f"  (failing: {', '.join(failed)})" if failed else ""
        terminalreporter.write_line(f"criterion {n} {status}: {title}{extra}")
