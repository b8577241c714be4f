import numpy as np
import pytest

from wavefock.corpus import haar_bank, stretched_haar_bank


@pytest.fixture
def haar():
    return haar_bank()


@pytest.fixture
def stretched():
    return stretched_haar_bank()


@pytest.fixture
def stretched_dual():
    return stretched_haar_bank(with_duals=True)


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)
