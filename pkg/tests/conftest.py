"""Shared fixtures: reference models, scale functions, and targets."""

import math

import numpy as np
import pytest

import snlevy as sn

JD_DICT = {
    "sigma2": 1.0,
    "drift": 1.0,
    "jumps": {"rate": 1.0, "law": {"exp_mean": 1.0}},
}


def jd_scale_closed_form(x):
    """Closed-form scale function of the reference jump-diffusion.

    For sigma2 = drift = rate = exp_mean = 1 the Laplace exponent is
    psi(t) = t^2 (t + 3) / (2 (1 + t)) and partial fractions give
    W(x) = (4 + 6 x - 4 e^{-3x}) / 9.
    """
    x = np.asarray(x, dtype=float)
    return np.where(x < 0, 0.0, (4.0 + 6.0 * x - 4.0 * np.exp(-3.0 * x)) / 9.0)


@pytest.fixture(scope="session")
def bm_model():
    return sn.LevyModel(1.0, 0.0)


@pytest.fixture(scope="session")
def jd_model():
    return sn.model_from_dict(JD_DICT)


@pytest.fixture(scope="session")
def bm_scale(bm_model):
    return sn.ScaleFunction(bm_model, 6.0, 1e-4)


@pytest.fixture(scope="session")
def jd_scale(jd_model):
    return sn.ScaleFunction(jd_model, 6.0, 1e-4)


@pytest.fixture(scope="session")
def bm_scale_wide(bm_model):
    # covers the support of the unit-rate exponential target
    # (truncated where its tail drops below 1e-8, around x = 18.4)
    return sn.ScaleFunction(bm_model, 25.0, 1e-4)


@pytest.fixture(scope="session")
def uniform_measure():
    return sn.measure_from_dict(
        {"density": {"kind": "uniform", "a": -1.0, "b": 1.0}})


@pytest.fixture(scope="session")
def twopoint_measure():
    return sn.measure_from_dict({"atoms": [[-1.0, 0.5], [1.0, 0.5]]})


@pytest.fixture(scope="session")
def exp_measure():
    return sn.measure_from_dict({"density": {"kind": "exp", "rate": 1.0}})


@pytest.fixture(scope="session")
def jd_twopoint_measure():
    p = 3.0 / (4.0 + 2.0 * math.exp(-3.0))
    return sn.measure_from_dict({"atoms": [[-1.0, 1.0 - p], [1.0, p]]})
