import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from mapcert import fixtures as F

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def small_fixtures():
    """Identity-map fixtures with cheap certification."""
    return {
        "sphere": F.sphere(1),
        "torus": F.torus(8, 8),
        "disk": F.disk(3, 12),
        "annulus": F.annulus(2, 16),
        "rect": F.rect_grid(10, 10),
        "ball": F.ball_hex(3),
        "solid_torus": F.solid_torus(),
        "shell": F.torus_shell(),
    }


ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture
def acceptance(request):
    """Record one PASS/FAIL line per acceptance criterion; see the terminal summary."""
    log = request.config.stash.setdefault(ACCEPTANCE, [])

    class Recorder:
        def __init__(self):
            self.detail = ""

        def __call__(self, number, title):
            self.number, self.title = number, title
            return self

        def __enter__(self):
            return self

        def __exit__(self, exc_type, exc, tb):
            status = "PASS" if exc_type is None else "FAIL"
            line = f"criterion {self.number:>2} {status}: {self.title}"
            if self.detail:
                line += f" [{self.detail}]"
            if exc_type is not None:
                line += f" ({exc_type.__name__}: {str(exc).splitlines()[0] if str(exc) else ''})"
            log.append((self.number, line))
            print(line)
            return False

    return Recorder()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    log = config.stash.get(ACCEPTANCE, [])
    if log:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(log):
            terminalreporter.write_line(line)
