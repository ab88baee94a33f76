import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from ortho2c import WeightSpec

settings.register_profile("ortho2c", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("ortho2c")

BUILTINS = {
    "hermite": WeightSpec.hermite(),
    "disk0": WeightSpec.disk(0.0),
    "disk15": WeightSpec.disk(1.5),
    "deltoid_t": WeightSpec.deltoid("T"),
    "deltoid_u": WeightSpec.deltoid("U"),
}
SYMMETRIC = ("hermite", "disk0", "disk15")


@pytest.fixture(params=list(BUILTINS), ids=list(BUILTINS))
def builtin(request):
    return BUILTINS[request.param]


@pytest.fixture(params=list(SYMMETRIC), ids=list(SYMMETRIC))
def symmetric(request):
    return BUILTINS[request.param]


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def rel_err(a, b) -> float:
    a = np.asarray(a)
    b = np.asarray(b)
    return float(np.max(np.abs(a - b)) / max(1.0, np.max(np.abs(b))))


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
