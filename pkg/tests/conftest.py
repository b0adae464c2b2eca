import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from gapforge.chain import ParamVector


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def stronger_a():
    return ParamVector(4, {(1, 2): 0.5, (2, 3): 0.7, (3, 4): 0.5, (1, 3): 0.7, (2, 4): 0.8, (1, 4): 0.9})


def pytest_addoption(parser):
    parser.addoption("--strict-conjectures", action="store_true",
                     help="treat conjecture findings as failures")
    parser.addoption("--run-slow", action="store_true", help="run hours-long sweeps")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--run-slow"):
        return
    skip = pytest.mark.skip(reason="needs --run-slow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)
