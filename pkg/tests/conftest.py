"""Shared fixtures and the --runslow switch."""

import numpy as np
import pytest

from src.domains.models import Dataset


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run slow acceptance tests")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def separable_dataset():
    # class 1 on the left half, class 0 on the right half of [0, 1]
    x = np.linspace(0.0, 1.0, 40)
    labels = (x < 0.5).astype(np.int64)
    return Dataset(features=x.reshape(-1, 1), labels=labels)
