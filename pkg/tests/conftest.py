"""Shared fixtures: the expensive fits run once per session."""

import pytest

from warranty2d import EconomicConfig, fit_joint_mle, load_dataset


@pytest.fixture(scope="session")
def dataset():
    return load_dataset()


@pytest.fixture(scope="session")
def joint_fit(dataset):
    return fit_joint_mle(dataset, seed=0)


@pytest.fixture(scope="session")
def model(joint_fit):
    return joint_fit.model


@pytest.fixture(scope="session")
def cfg700(model):
    return EconomicConfig.calibrated(model, 700.0)
