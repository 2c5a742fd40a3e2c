"""
Shared pytest setup: puts src/ on the import path and provides the
large simulated runs reused across test modules
"""

import math
import sys
from pathlib import Path

import pytest

SRC = Path(__file__).parent / "src"
if str(SRC) not in sys.path:
    sys.path.insert(0, str(SRC))

from core.dense_protocol import ProtocolConfig, run_trials  # noqa: E402

MILLION = 1000000
SIGMA2_OPT_R1 = math.sinh(1.0) * math.cosh(1.0)


@pytest.fixture(scope="session")
def optimal_r1_batch():
    """10^6 rounds at r = 1 with the optimal modulation sinh(1)cosh(1)"""
    return run_trials(ProtocolConfig(r=1.0, sigma2=SIGMA2_OPT_R1, trials=MILLION, seed=7))


@pytest.fixture(scope="session")
def unit_snr_batch():
    """10^6 rounds without squeezing at sigma2 = 1"""
    return run_trials(ProtocolConfig(r=0.0, sigma2=1.0, trials=MILLION, seed=1))


@pytest.fixture(scope="session")
def r1_batch():
    """10^6 rounds at r = 1, sigma2 = 1"""
    return run_trials(ProtocolConfig(r=1.0, sigma2=1.0, trials=MILLION, seed=2))
