import numpy as np
import pytest

from casimir.constants import plasma_frequency
from casimir.materials import Drude, Plasma
from casimir.reflection import Bulk, Perfect

GOLD_LAMBDA_P = 137e-9
GOLD_OMEGA_P = plasma_frequency(GOLD_LAMBDA_P)


@pytest.fixture
def omega_p():
    return GOLD_OMEGA_P


@pytest.fixture
def plasma_mirror():
    return Bulk(Plasma(GOLD_OMEGA_P))


@pytest.fixture
def drude_mirror():
    return Bulk(Drude(GOLD_OMEGA_P, 4e-3 * GOLD_OMEGA_P))


@pytest.fixture
def perfect_mirror():
    return Perfect()


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)
