"""Scale-function evaluation against closed forms and transform checks."""

import numpy as np
import pytest

import snlevy as sn
from snlevy.errors import DomainError

from conftest import jd_scale_closed_form


def test_bm_scale_closed_form(bm_scale):
    # W(x) = 2 x / sigma2 for driftless Brownian motion
    xs = np.linspace(0.0, 5.0, 101)
    assert np.max(np.abs(bm_scale.w(xs) - 2.0 * xs)) < 1e-10
    assert bm_scale.w_prime(1.3) == pytest.approx(2.0, abs=1e-8)
    assert bm_scale.w_prime_at_zero == 2.0


def test_jd_scale_closed_form(jd_scale):
    xs = np.linspace(0.0, 5.0, 501)
    diff = np.abs(jd_scale.w(xs) - jd_scale_closed_form(xs))
    assert np.max(diff) < 1e-10
    assert jd_scale.w_prime_at_zero == 2.0


def test_numeric_matches_closed_form(jd_model):
    numeric = sn.ScaleFunction(jd_model, 6.0, 1e-4, force_numeric=True)
    xs = np.linspace(0.0, 5.0, 501)
    diff = np.abs(numeric.w(xs) - jd_scale_closed_form(xs))
    assert np.max(diff) < 1e-6
    assert numeric.w_prime_at_zero == 2.0


def test_laplace_residual(jd_model, jd_scale):
    numeric = sn.ScaleFunction(jd_model, 6.0, 1e-4, force_numeric=True)
    for theta in (1.0, 2.0, 4.0):
        assert jd_scale.laplace_residual(theta) < 1e-4
        assert numeric.laplace_residual(theta) < 1e-4


def test_exit_probabilities(bm_scale, jd_scale):
    # two-sided exit upward: W(x - a) / W(b - a)
    assert bm_scale.exit_up_prob(0.0, -1.0, 1.0) == pytest.approx(
        0.5, abs=1e-10)
    w = jd_scale_closed_form
    assert jd_scale.exit_up_prob(0.0, -1.0, 1.0) == pytest.approx(
        float(w(1.0) / w(2.0)), abs=1e-9)
    # no jumps: the lower level can only be hit continuously
    assert bm_scale.exit_creep_prob(0.0, -1.0, 1.0) == pytest.approx(
        0.5, abs=1e-8)


def test_creep_probability_bounds(jd_scale):
    p = jd_scale.exit_creep_prob(0.0, -1.0, 1.0)
    p_up = jd_scale.exit_up_prob(0.0, -1.0, 1.0)
    assert 0.0 < p < 1.0 - p_up


def test_expected_exit_time(bm_scale, jd_scale):
    # driftless Brownian motion: E = |a| b
    assert bm_scale.expected_exit_time(0.0, -1.0, 1.0) == pytest.approx(
        1.0, abs=1e-8)
    assert bm_scale.expected_exit_time(0.0, -2.0, 1.0) == pytest.approx(
        2.0, abs=1e-7)
    assert jd_scale.expected_exit_time(0.0, -1.0, 1.0) > 0.0


def test_wq_discounted(bm_scale):
    # W^(q)(x) = sinh(x sqrt(2q)) / sqrt(q/2) for sigma2 = 1
    q, x = 1.0, 1.5
    exact = np.sinh(x * np.sqrt(2.0 * q)) / np.sqrt(q / 2.0)
    assert bm_scale.w_q(q, x) == pytest.approx(exact, rel=1e-6)


def test_w_bar_is_integral(bm_scale):
    # running integral of W: x^2 for the driftless unit Brownian case
    assert bm_scale.w_bar(2.0) == pytest.approx(4.0, rel=1e-6)


def test_convolutions(bm_scale):
    # (W*W)(x) = 4 x^3 / 6 and (W*W')(x) = 4 x^2 / 2 for W = 2x
    assert bm_scale.conv_ww(1.5) == pytest.approx(
        4.0 * 1.5 ** 3 / 6.0, rel=1e-5)
    assert bm_scale.conv_wwprime(1.5) == pytest.approx(
        4.0 * 1.5 ** 2 / 2.0, rel=1e-5)


def test_potential_density_positive(bm_scale):
    assert bm_scale.potential_density_uq(1.0, 0.5) > 0.0


def test_domain_guard(bm_scale):
    with pytest.raises(DomainError):
        bm_scale.w(7.0)
    assert bm_scale.w(-1.0) == 0.0


def test_winf_bound_ordering(jd_scale):
    rng = np.random.default_rng(7)
    for _ in range(100):
        a = rng.uniform(0.2, 4.0)
        x = rng.uniform(0.0, a)
        lhs, mid, rhs = jd_scale.winf_bound_check(a, x)
        assert lhs <= mid + 1e-12
        assert mid <= rhs + 1e-12
