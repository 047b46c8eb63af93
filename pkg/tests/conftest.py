import functools

import pytest

from powermonoid.census import census_records, enumerate_monoids
from powermonoid.serialize import load_fixture


@functools.lru_cache(maxsize=None)
def monoids_of_order(n, idempotent=False, almost_breakable=False):
    return tuple(enumerate_monoids(n, idempotent=idempotent, almost_breakable=almost_breakable))


def monoids_upto(n, **kw):
    return [H for k in range(1, n + 1) for H in monoids_of_order(k, **kw)]


@functools.lru_cache(maxsize=None)
def records_of_order(n):
    return tuple(census_records(n, workers=1))


def records_upto(n):
    return [r for k in range(1, n + 1) for r in records_of_order(k)]


@pytest.fixture(scope="session")
def fx():
    return load_fixture


# --- acceptance summary ----------------------------------------------------

_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(num, text): acceptance criterion checked by this test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    num, text = mark.args
    ok = rep.passed if rep.when == "call" else not rep.failed
    prev = _criteria.get(num, (text, True))
    _criteria[num] = (text, prev[1] and ok)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_criteria):
        text, ok = _criteria[num]
        terminalreporter.write_line(f"criterion {num}: {'PASS' if ok else 'FAIL'}  {text}")
