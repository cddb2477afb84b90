"""Expected-local-time functional and its extremes."""

import math

import numpy as np
import pytest

import snlevy as sn
from snlevy.errors import UnsupportedError


def test_lambda_twopoint(bm_scale, twopoint_measure):
    # V(y) = |y| on [-1, 1] for the symmetric two-point target, so the
    # supremum is 1 at y = +-1
    lf = sn.LocalTimeFunctional(twopoint_measure, bm_scale)
    assert lf.lambda_mu == pytest.approx(1.0, abs=1e-4)
    assert abs(lf.argmax_y) == pytest.approx(1.0, abs=1e-2)


def test_lambda_uniform(bm_scale, uniform_measure):
    # V(y) = (1 - (1 - |y|)^2) / 2 on [-1, 1], supremum 1/2 at y = +-1
    lf = sn.LocalTimeFunctional(uniform_measure, bm_scale)
    assert lf.lambda_mu == pytest.approx(0.5, abs=1e-4)


def test_v_closed_form(bm_scale, uniform_measure):
    lf = sn.LocalTimeFunctional(uniform_measure, bm_scale)
    # driftless Brownian motion: v(x, y) = 2 (x^+ + (-y)^+ - (x-y)^+)
    for x, y in [(0.5, 0.25), (-0.5, 0.25), (0.8, -0.3)]:
        exact = 2.0 * (max(x, 0.0) + max(-y, 0.0) - max(x - y, 0.0))
        assert lf.v(x, y) == pytest.approx(exact, abs=1e-9)


def test_ratio_weights(bm_scale, twopoint_measure):
    lf = sn.LocalTimeFunctional(twopoint_measure, bm_scale)
    assert lf.ratio(0.0) == pytest.approx(1.0, abs=1e-6)
    assert math.isinf(lf.ratio(1.0))


def test_lambda_matches_expected_local_time(bm_scale, uniform_measure,
                                            twopoint_measure):
    # the least achievable expected local time at zero equals the
    # expected local time of the boundary embeddings (minimality)
    assert sn.LocalTimeFunctional(
        uniform_measure, bm_scale).lambda_mu == pytest.approx(
            sn.expected_local_time(uniform_measure, bm_scale),
            abs=1e-4)
    assert sn.LocalTimeFunctional(
        twopoint_measure, bm_scale).lambda_mu == pytest.approx(
            sn.expected_local_time(twopoint_measure, bm_scale),
            abs=1e-4)


def test_vq_positive(bm_scale, uniform_measure):
    lf = sn.LocalTimeFunctional(uniform_measure, bm_scale)
    assert lf.vq(1.0, 0.5, 0.25) > 0.0


def test_expected_inverse_local_time_exact():
    # sigma2 / drift^2 for Brownian motion with drift
    assert sn.expected_inverse_local_time(sn.LevyModel(1.0, 0.5)) == 4.0
    assert sn.expected_inverse_local_time(sn.LevyModel(2.0, 1.0)) == 2.0


def test_expected_inverse_local_time_guards(bm_model):
    with pytest.raises(UnsupportedError):
        sn.expected_inverse_local_time(bm_model)
