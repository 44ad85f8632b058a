import os

import pytest


@pytest.fixture(scope="session", autouse=True)
def _isolated_cache(tmp_path_factory):
    """Character tables are recomputed into a per-session directory unless GLNQ_TEST_CACHE is set."""
    path = os.environ.get("GLNQ_TEST_CACHE") or str(tmp_path_factory.mktemp("glnq-cache"))
    old = os.environ.get("GLNQ_CACHE")
    os.environ["GLNQ_CACHE"] = path
    yield path
    if old is None:
        os.environ.pop("GLNQ_CACHE", None)
    else:
        os.environ["GLNQ_CACHE"] = old


# acceptance criteria: a criterion passes when every test carrying its marker passes
_CRITERIA: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): one of the numbered acceptance criteria")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is None:
        return
    number, title = mark.args
    entry = _CRITERIA.setdefault(number, {"title": title, "ok": True, "seen": False})
    if report.when == "call":
        entry["seen"] = True
    if report.failed or (report.when == "setup" and report.skipped):
        entry["ok"] = False


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        entry = _CRITERIA[number]
        verdict = "PASS" if entry["ok"] and entry["seen"] else "FAIL"
        terminalreporter.write_line(f"criterion {number:2d}: {verdict}  {entry['title']}")
