import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.failed):
        number, title = mark.args
        detail = "; ".join(str(v) for k, v in item.user_properties if k == "detail")
        _CRITERIA[number] = (title, "PASS" if rep.passed else "FAIL", detail)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        title, status, detail = _CRITERIA[number]
        line = f"[{status}] {number:2d}. {title}"
        if detail:
            line += f"  ({detail})"
        terminalreporter.write_line(line)
