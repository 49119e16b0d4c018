import random

import pytest

from graphboot.graph import SimpleGraph


def random_graph(rnd: random.Random, n: int, p: float) -> SimpleGraph:
    return SimpleGraph.from_edges(
        n, [(a, b) for a in range(n) for b in range(a + 1, n) if rnd.random() < p]
    )


@pytest.fixture
def rnd():
    return random.Random(20240611)


_RESULTS = pytest.StashKey[dict]()


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(k): acceptance criterion number k")
    config.stash[_RESULTS] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    k = mark.args[0]
    results = item.config.stash[_RESULTS]
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        detail = dict(item.user_properties).get("detail", "")
        results[k] = (rep.passed, rep.duration, detail)


def pytest_terminal_summary(terminalreporter, config):
    results = config.stash[_RESULTS]
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(results):
        ok, secs, detail = results[k]
        terminalreporter.write_line(
            f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  ({secs:.1f}s)  {detail}"
        )
