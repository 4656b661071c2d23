import sys
import pytest

from chatelet.counting import surface

# (delta, coefficients of f, constant term first); covers r = 1..4 and both signs
FIXTURES = [
    (1, [1, 0, 0, 0, 1]),            # z^4 + 1, r = 1
    (2, [-2, 0, 1, 0, 1]),           # (z^2 + 2)(z^2 - 1), r = 3
    (5, [1, 0, 0, 0, 1]),            # r = 1
    (-2, [1, 0, 0, 0, 1]),           # r = 1, indefinite
    (-3, [-2, 0, 0, 1]),             # z^3 - 2, r = 2 with v
    (23, [-1, -1, 0, 1]),            # Hilbert class field cubic, h = 3
    (-2, [0, 2, -1, -2, 1]),         # four linear factors, r = 4
    (5, [0, -1, 0, 1]),              # z^3 - z, r = 4 with v
    (1, [-6, 0, 5, 0, -1]),          # (3 - z^2)(z^2 - 2), r = 2
    (-3, [0, -1, 0, 1]),             # r = 4 indefinite
    (1, [3, 0, 0, 0, 3]),            # 3(z^4 + 1)
    (2, [-9, 0, 0, 1]),              # z^3 - 9, r = 2
]


def fixture_id(fx):
    return f"d{fx[0]}_f{'_'.join(map(str, fx[1]))}"


@pytest.fixture(params=FIXTURES, ids=fixture_id)
def fixture_surface(request):
    return surface(*request.param)


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: runs longer than a few seconds")


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
