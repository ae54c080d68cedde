import pytest

from frobdiv.classpoly import HilbertCache, set_default_cache
from frobdiv.curve import CurveQ

# y^2 = x(x-1)(x-3): full rational 2-torsion, j = 21952/9
QUINTIC_CURVE = "0,-4,0,3,0"
# y^2 = x^3 - 15x + 22: CM by the order of discriminant -12
GAUSS_CURVE = "0,0,0,-15,22"
PURE_CUBIC = "0,-2"
CURVE_37A = "0,0,1,-1,0"
SMALL_CURVE = "1,1"
SAMPLE_CURVES = [QUINTIC_CURVE, GAUSS_CURVE, PURE_CUBIC, CURVE_37A, SMALL_CURVE]

EXAMPLE_QUINTIC = "0,90,0,3645,-6480"


@pytest.fixture(scope="session", autouse=True)
def shared_cache():
    cache = HilbertCache(maxsize=20000)
    set_default_cache(cache)
    yield cache
    set_default_cache(None)


@pytest.fixture(scope="session")
def quintic_curve():
    return CurveQ.parse(QUINTIC_CURVE)


@pytest.fixture(scope="session")
def gauss_curve():
    return CurveQ.parse(GAUSS_CURVE)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
