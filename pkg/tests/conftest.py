import numpy as np
import pytest

from dcecavity.cavity_spectrum import CavityParams
from dcecavity.coupling_coeffs import build_couplings

# Reference configurations used throughout the suite.
ASYM_FREE = CavityParams(1.0, 0.44, 0.5, 0.0)
ASYM_COND = CavityParams(1.0, 0.44, 0.5, 200.0)
LEFT_HEAVY = CavityParams(1.0, -0.2, 3.0, 50.0)


@pytest.fixture(scope="session")
def free_couplings():
    return build_couplings(ASYM_FREE, 10)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20261016)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
