import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from projpoints import build_fourier_lift, build_mobius_lift
from projpoints.diffeo import Harmonic

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

N = 512


@pytest.fixture
def sin2():
    """f = a + 0.1 sin 2a, the running example."""
    return build_fourier_lift([Harmonic(1, 0.1, 0.0)])


@pytest.fixture
def sin4():
    return build_fourier_lift([Harmonic(2, 0.05, 0.0)])


@pytest.fixture
def stretch():
    return build_mobius_lift([[2.0, 0.0], [0.0, 0.5]])


def grid(n=N, period=np.pi):
    return np.arange(n) * (period / n)


ACCEPTANCE_LINES = pytest.StashKey[list]()


@pytest.fixture(scope="session")
def criterion(request):
    """Record one pass/fail line per acceptance criterion, then assert it."""
    lines = request.config.stash.setdefault(ACCEPTANCE_LINES, [])

    def record(number, title, ok, detail):
        line = f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {title}: {detail}"
        lines.append((number, line))
        print(line)
        assert ok, line
    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(ACCEPTANCE_LINES, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
