import math

import pytest
from hypothesis import HealthCheck, settings

from wormszego import GridSpec, validate_params

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

BETAS = (1.7, math.pi, 4.0)

# lines printed by the acceptance suite, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(params=BETAS, ids=lambda b: f"beta={b:.4g}")
def params(request):
    return validate_params(request.param)


@pytest.fixture
def pi_params():
    return validate_params(math.pi)


@pytest.fixture(scope="session")
def small_grid():
    return GridSpec(20.0, 512, 8)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
