import numpy as np
import pytest

from core.settings import SettingsManager


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def settings(tmp_path):
    return SettingsManager(str(tmp_path))
