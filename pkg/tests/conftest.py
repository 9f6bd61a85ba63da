import functools

import pytest

from frobalg.field import find_parameters, make_prime_field, params_for_field
from frobalg.quotient import build_quotient


@functools.lru_cache(maxsize=None)
def quotient_for(p: int, mode: str = "lazard", q: int | None = None):
    params = params_for_field(p, make_prime_field(q)) if q else find_parameters(p, mode)
    return build_quotient(params)


@pytest.fixture(scope="session")
def quotient():
    return quotient_for


_CRITERIA: dict[int, tuple[str, list[bool]]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion the test belongs to")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or report.when != "call" and not report.failed:
        return
    n, title = mark.args
    _CRITERIA.setdefault(n, (title, []))[1].append(report.passed)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        title, results = _CRITERIA[n]
        verdict = "PASS" if results and all(results) else "FAIL"
        terminalreporter.write_line(f"{verdict} criterion {n}: {title} ({sum(results)}/{len(results)} tests)")
