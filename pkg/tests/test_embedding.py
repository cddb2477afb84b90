"""Boundary construction, admissibility, and pairing checks."""

import numpy as np
import pytest

import snlevy as sn
from snlevy.errors import AdmissibilityError


def test_twopoint_boundary(bm_scale, twopoint_measure):
    bd = sn.build_two_sided(twopoint_measure, bm_scale)
    assert bd.has_up and bd.has_down
    assert np.all(np.diff(bd.fplus) >= 0.0)
    assert np.all(np.diff(bd.fminus) >= 0.0)
    # the symmetric two-point target at +-1 stops at the levels
    assert bd.fplus[-1] == pytest.approx(1.0, abs=1e-6)
    assert bd.fminus[-1] == pytest.approx(1.0, abs=1e-6)
    # stopping-intensity tables attached for sub-resolution stops
    assert "hazard_up" in bd.meta and "hazard_dn" in bd.meta


def test_check_admissible(bm_scale, twopoint_measure, uniform_measure):
    for m in (twopoint_measure, uniform_measure):
        info = sn.check_admissible(m, bm_scale)
        assert info["lhs"] == pytest.approx(info["rhs"], abs=1e-6)


def test_inadmissible_raises(bm_scale):
    lopsided = sn.measure_from_dict({"atoms": [[-2.0, 0.2], [1.0, 0.8]]})
    with pytest.raises(AdmissibilityError):
        sn.build_two_sided(lopsided, bm_scale)


def test_shift_restores_balance():
    model = sn.LevyModel(1.0, 0.5)
    scale = sn.ScaleFunction(model, 8.0, 1e-4)
    target = sn.measure_from_dict(
        {"density": {"kind": "uniform", "a": -1.0, "b": 1.0}})
    shifted, offset = sn.shift_embedding(target, model)
    info = sn.check_admissible(shifted, scale)
    assert info["lhs"] == pytest.approx(info["rhs"], rel=1e-4)
    assert shifted.a_mu == pytest.approx(-1.0 - offset, abs=1e-9)


def test_density_boundary_pairing(bm_scale, uniform_measure):
    # the symmetric uniform target pairs y with -y
    ys, gs = sn.solve_pairing(uniform_measure, bm_scale)
    assert float(np.max(np.abs(gs + ys))) < 1e-6


def test_density_boundary(bm_scale, uniform_measure):
    bd = sn.build_density(uniform_measure, bm_scale)
    assert bd.has_up and bd.has_down
    assert np.all(np.diff(bd.fplus) >= 0.0)
    assert bd.fplus[-1] == pytest.approx(1.0, abs=1e-3)
    assert "hazard_up" in bd.meta


def test_general_matches_nonatomic(bm_scale, uniform_measure):
    general = sn.build_two_sided(uniform_measure, bm_scale)
    fast = sn.build_two_sided_nonatomic(uniform_measure, bm_scale)
    ell = np.linspace(0.0, min(general.ell[-1], fast.ell[-1]), 2001)
    for attr in ("fplus", "fminus"):
        g = np.interp(ell, general.ell, getattr(general, attr))
        f = np.interp(ell, fast.ell, getattr(fast, attr))
        assert float(np.max(np.abs(g - f))) < 1e-6


def test_one_sided_boundary(bm_scale_wide, exp_measure):
    bd = sn.build_one_sided(exp_measure, bm_scale_wide)
    assert bd.has_up and not bd.has_down
    assert np.all(np.diff(bd.fplus) >= 0.0)
    assert bd.fplus[0] == pytest.approx(0.0, abs=1e-9)
    assert "hazard_up" in bd.meta


def test_boundary_evaluators(bm_scale, twopoint_measure):
    bd = sn.build_two_sided(twopoint_measure, bm_scale)
    l_hi = bd.ell[-1]
    assert bd.phi_plus(l_hi) == pytest.approx(1.0, abs=1e-6)
    assert bd.phi_minus(l_hi) == pytest.approx(1.0, abs=1e-6)


def test_expected_local_time_values(bm_scale, uniform_measure,
                                    twopoint_measure):
    # integral of W against the target: 0.5 and 1.0 respectively
    assert sn.expected_local_time(uniform_measure, bm_scale) == \
        pytest.approx(0.5, abs=1e-6)
    assert sn.expected_local_time(twopoint_measure, bm_scale) == \
        pytest.approx(1.0, abs=1e-9)


def test_integrability_check(bm_scale, uniform_measure):
    info = sn.check_integrability(uniform_measure, bm_scale)
    assert all(np.isfinite(v) for v in info.values()
               if isinstance(v, float))


def test_law_of_local_time(bm_scale, twopoint_measure):
    bd = sn.build_two_sided(twopoint_measure, bm_scale)
    xlaw = sn.ExcursionLaw(bm_scale)
    ks = np.array([0.1, 0.5, 1.0, 2.0])
    surv = sn.law_of_local_time(bd, xlaw, ks)
    assert np.all(np.diff(surv) <= 1e-12)
    assert np.all((surv >= 0.0) & (surv <= 1.0))
