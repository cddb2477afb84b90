"""Excursion-measure functionals: closed forms and identities."""

import math

import numpy as np
import pytest

import snlevy as sn
from snlevy.errors import DomainError, UnsupportedError


@pytest.fixture(scope="module")
def bm_xlaw(bm_scale):
    return sn.ExcursionLaw(bm_scale)


@pytest.fixture(scope="module")
def jd_xlaw(jd_scale):
    return sn.ExcursionLaw(jd_scale)


def test_bm_sup_mass(bm_xlaw):
    # 1 / W(eta) = 1 / (2 eta)
    for eta in (0.5, 1.0, 2.0):
        assert bm_xlaw.n_sup_ge(eta) == pytest.approx(
            1.0 / (2.0 * eta), rel=1e-9)
        assert bm_xlaw.n_inf_le(eta) == pytest.approx(
            1.0 / (2.0 * eta), rel=1e-9)


def test_bm_signed_max_symmetric(bm_xlaw):
    up, down = bm_xlaw.n_signed_max(0.8)
    assert up == pytest.approx(down, rel=1e-8)
    assert up == pytest.approx(1.0 / 1.6, rel=1e-9)


def test_signed_up_equals_sup(jd_xlaw):
    for a in (0.4, 0.9, 1.7):
        assert jd_xlaw.n_signed_max(a)[0] == jd_xlaw.n_sup_ge(a)


def test_joint_decomposition(bm_xlaw, jd_xlaw):
    # undiscounted joint functional splits into the strict-sup joint
    # mass plus the sup mass
    for xl in (bm_xlaw, jd_xlaw):
        for eta, delta in [(0.7, 1.3), (1.0, 1.0), (2.0, 0.4)]:
            lhs = xl.n_qjoint(0.0, eta, delta)
            rhs = xl.n_joint(eta, delta) + xl.n_sup_ge(eta)
            assert abs(lhs - rhs) < 1e-8


def test_qjoint_reduces_at_zero(bm_xlaw):
    # W^(0) = W, so the q = 0 joint value has a closed Brownian form:
    # 2 (eta + delta) / (4 eta delta)
    eta, delta = 0.9, 1.1
    exact = 2.0 * (eta + delta) / (4.0 * eta * delta)
    assert bm_xlaw.n_qjoint(0.0, eta, delta) == pytest.approx(
        exact, rel=1e-8)


def test_hit_up_q_monotone(bm_xlaw):
    # discounting can only reduce the mass
    eta = 1.0
    vals = [bm_xlaw.n_hit_up_q(q, eta) for q in (0.0, 0.5, 2.0)]
    assert vals[0] == pytest.approx(bm_xlaw.n_sup_ge(eta), rel=1e-10)
    assert vals[0] > vals[1] > vals[2]


def test_bm_expected_hit_time(bm_xlaw):
    # (W*W)(eta) / W(eta)^2 = eta / 6 for W = 2x
    for eta in (0.5, 1.5, 3.0):
        assert bm_xlaw.n_exp_hit_up(eta) == pytest.approx(
            eta / 6.0, rel=1e-4)


def test_oscillating_guard(bm_xlaw):
    # expected downward hitting times need upward drift
    with pytest.raises(UnsupportedError):
        bm_xlaw.n_exp_hit_down(1.0, 1.0)
    with pytest.raises(UnsupportedError):
        bm_xlaw.n_exp_hit_down_neg(1.0)


def test_drifting_down_functionals():
    m = sn.LevyModel(1.0, 0.5)
    xl = sn.ExcursionLaw(sn.ScaleFunction(m, 6.0, 1e-4))
    assert xl.n_exp_hit_down(1.0, 1.0) > 0.0
    assert xl.n_exp_hit_down_neg(1.0) > 0.0


def test_argument_validation(bm_xlaw):
    with pytest.raises(DomainError):
        bm_xlaw.n_sup_ge(0.0)
    with pytest.raises(DomainError):
        bm_xlaw.n_joint(1.0, -1.0)
    with pytest.raises(DomainError):
        bm_xlaw.n_qjoint(-1.0, 1.0, 1.0)
