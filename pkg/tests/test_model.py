"""Laplace exponent, inverse, and model construction."""

import math

import numpy as np
import pytest

import snlevy as sn
from snlevy.errors import DomainError, UnsupportedError

from conftest import JD_DICT


def test_bm_exponent(bm_model):
    for t in (0.5, 1.0, 3.0):
        assert bm_model.psi(t) == t * t / 2.0
        assert bm_model.psi_prime(t) == t


def test_drifted_bm_exponent():
    m = sn.LevyModel(2.0, 0.5)
    assert m.psi(1.0) == 1.0 + 0.5
    assert m.sigma == math.sqrt(2.0)


def test_jd_exponent_closed_form(jd_model):
    # psi(t) = t^2 (t + 3) / (2 (1 + t)) for this parameter set
    for t in (0.25, 1.0, 2.0, 5.0):
        exact = t * t * (t + 3.0) / (2.0 * (1.0 + t))
        assert jd_model.psi(t) == pytest.approx(exact, rel=1e-12)


def test_jd_derivatives_at_zero(jd_model):
    d1, d2 = jd_model.psi_derivatives_at_zero()
    assert d1 == 0.0
    assert d2 == pytest.approx(3.0, rel=1e-12)


def test_regimes(bm_model, jd_model):
    assert bm_model.regime is sn.Regime.OSCILLATES
    assert jd_model.regime is sn.Regime.OSCILLATES
    assert sn.LevyModel(1.0, 0.5).regime is sn.Regime.DRIFTS_TO_PLUS_INFINITY


def test_phi_inverts_psi(jd_model):
    assert jd_model.phi(1.0) == pytest.approx(1.0, abs=1e-12)
    for q in (0.5, 2.0, 7.0):
        assert jd_model.psi(jd_model.phi(q)) == pytest.approx(q, rel=1e-10)
    # driftless Brownian case: phi(q) = sqrt(2 q / sigma2)
    bm = sn.LevyModel(1.0, 0.0)
    assert bm.phi(2.0) == pytest.approx(2.0, rel=1e-12)


def test_phi_prime():
    m = sn.LevyModel(1.0, 0.5)
    assert m.phi_prime(0.0) == pytest.approx(2.0, rel=1e-12)
    q = 1.0
    assert m.phi_prime(q) == pytest.approx(
        1.0 / m.psi_prime(m.phi(q)), rel=1e-12)


def test_phi_prime_oscillating_diverges(bm_model):
    with pytest.raises((UnsupportedError, ZeroDivisionError, DomainError)):
        val = bm_model.phi_prime(0.0)
        assert not math.isfinite(val)


def test_model_from_dict_roundtrip(jd_model):
    m = sn.model_from_dict(JD_DICT)
    for t in (0.5, 1.5):
        assert m.psi(t) == jd_model.psi(t)


def test_model_validation():
    with pytest.raises(DomainError):
        sn.LevyModel(-1.0, 0.0)
    with pytest.raises(DomainError):
        sn.LevyModel(0.0, 1.0)  # no Gaussian part, no jumps
    with pytest.raises(DomainError):
        sn.LevyModel(1.0, -1.0)  # drifts to -infinity
    with pytest.raises(DomainError):
        sn.model_from_dict({"sigma2": 1.0, "drift": 0.0, "bogus": 1})


def test_simulable_flag(bm_model, jd_model):
    assert bm_model.simulable
    assert jd_model.simulable


def test_levy_tail_mean(jd_model):
    # unit-mean exponential jumps at unit rate
    assert jd_model.levy_tail_mean == pytest.approx(1.0, rel=1e-12)
