import pytest

from polyguard.corpus import L_POLYGON, RECTANGLE, UNIT_SQUARE, comb_polygon, corpus, regular_polygon, spiral_polygon
from polyguard.geometry import SimplePolygon


@pytest.fixture
def square():
    return SimplePolygon(UNIT_SQUARE)


@pytest.fixture
def rect():
    return SimplePolygon(RECTANGLE)


@pytest.fixture
def lpoly():
    return SimplePolygon(L_POLYGON)


@pytest.fixture
def comb():
    return comb_polygon(6)


@pytest.fixture
def spiral():
    return spiral_polygon(40)


@pytest.fixture(scope="session")
def small_corpus():
    return corpus(7, 30, (4, 40))


@pytest.fixture
def convex10():
    return regular_polygon(10)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted((k for k in results if isinstance(k, int))):
        ok, detail = results[key]
        terminalreporter.write_line(f"criterion {key:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
