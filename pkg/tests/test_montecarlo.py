"""Simulation engine: configuration, stopping rules, reproducibility."""

import numpy as np
import pytest

import snlevy as sn
from snlevy.errors import DomainError
from snlevy.montecarlo import (RULE_TILDE, SimConfig, first_exit,
                               first_hit_up, ks_distance, run_stop_T,
                               run_stop_T_mu, run_stop_T_tilde, sample_path,
                               validate)


@pytest.fixture(scope="module")
def quick():
    return SimConfig(dt=1e-4, t_max=100.0, n_paths=2000, seed=11, eps=0.02)


def test_config_validation():
    with pytest.raises(DomainError):
        SimConfig(dt=-1.0)
    with pytest.raises(DomainError):
        SimConfig(n_paths=0)
    with pytest.raises(DomainError):
        SimConfig(accel_cap=0.5)
    with pytest.raises(DomainError):
        SimConfig(dt=1e-4, eps=1e-6)  # band unresolvable at this step
    assert SimConfig(dt=1e-4).eps == pytest.approx(1e-2)


def test_first_exit_law(bm_model, quick):
    res = first_exit(bm_model, quick, -1.0, 1.0)
    p = float(np.mean(res.x >= 1.0))
    se = np.sqrt(0.25 / quick.n_paths)
    assert abs(p - 0.5) < 3.0 * se
    assert res.censor_rate == 0.0


def test_first_exit_time(bm_model, quick):
    res = first_exit(bm_model, quick, -1.0, 1.0)
    se = np.std(res.t) / np.sqrt(quick.n_paths)
    assert abs(float(np.mean(res.t)) - 1.0) < 4.0 * se


def test_twopoint_run(bm_model, bm_scale, twopoint_measure, quick):
    bd = sn.build_two_sided(twopoint_measure, bm_scale)
    res = run_stop_T_tilde(bd, bm_model, quick)
    xs = res.x[res.stopped]
    p = float(np.mean(xs >= 1.0 - 1e-9))
    se = np.sqrt(0.25 / len(xs))
    assert abs(p - 0.5) < 3.0 * se
    # stops land exactly on the levels
    assert np.all(np.isin(np.round(xs, 6), [-1.0, 1.0]))


def test_uniform_run_ks(bm_model, bm_scale, uniform_measure, quick):
    bd = sn.build_density(uniform_measure, bm_scale)
    res = run_stop_T(bd, bm_model, quick)
    rep = validate(res, uniform_measure, scale=bm_scale, boundary=bd,
                   xlaw=sn.ExcursionLaw(bm_scale))
    assert rep.ks < 0.05
    assert abs(rep.mean_x) < 4.0 * rep.mean_se
    assert rep.censor_rate < 0.02


def test_one_sided_run(bm_model, bm_scale_wide, exp_measure):
    config = SimConfig(dt=1e-4, t_max=2000.0, n_paths=800, seed=3, eps=0.02)
    bd = sn.build_one_sided(exp_measure, bm_scale_wide)
    res = run_stop_T_mu(bd, bm_model, config)
    xs = res.x[res.stopped]
    assert res.censor_rate < 0.05
    assert ks_distance(xs, exp_measure) < 0.08
    assert "sup_equals_stop" in res.meta


def test_one_sided_rejects_two_sided(bm_model, bm_scale, twopoint_measure,
                                     quick):
    bd = sn.build_two_sided(twopoint_measure, bm_scale)
    with pytest.raises(DomainError):
        run_stop_T_mu(bd, bm_model, quick)


def test_seed_reproducibility(bm_model, quick):
    a = first_exit(bm_model, quick, -1.0, 1.0)
    b = first_exit(bm_model, quick, -1.0, 1.0)
    assert np.array_equal(a.x, b.x) and np.array_equal(a.t, b.t)
    other = SimConfig(dt=1e-4, t_max=100.0, n_paths=2000, seed=12, eps=0.02)
    c = first_exit(bm_model, other, -1.0, 1.0)
    assert not np.array_equal(a.x, c.x)


def test_threads_do_not_change_results(bm_model):
    config = SimConfig(dt=1e-4, t_max=50.0, n_paths=64, seed=5, eps=0.02)
    a = first_exit(bm_model, config, -1.0, 1.0, threads=1)
    b = first_exit(bm_model, config, -1.0, 1.0, threads=4)
    assert np.array_equal(a.x, b.x) and np.array_equal(a.t, b.t)


def test_sample_path_matches_batch(bm_model, bm_scale, twopoint_measure):
    config = SimConfig(dt=1e-4, t_max=100.0, n_paths=8, seed=21, eps=0.02)
    bd = sn.build_two_sided(twopoint_measure, bm_scale)
    res = run_stop_T_tilde(bd, bm_model, config)
    for pid in range(8):
        rec = sample_path(bm_model, config, boundary=bd, rule=RULE_TILDE,
                          path_id=pid)
        assert rec.stop_time == res.t[pid]
        assert rec.stop_x == res.x[pid]
        assert rec.status == res.status[pid]
        assert rec.times[0] == 0.0
        assert np.all(np.diff(rec.times) >= 0.0)


def test_first_hit_up_local_time(bm_model):
    # expected local time at zero when hitting 1 before -9:
    # W(1) W(9) / W(10) = 2 * 0.9
    config = SimConfig(dt=1e-4, t_max=2000.0, n_paths=1500, seed=9, eps=0.02)
    res = first_hit_up(bm_model, config, 1.0, cutoff=-9.0)
    mean_l = float(np.mean(res.l))
    exact = 2.0 * 18.0 / 20.0
    assert abs(mean_l - exact) < 0.1 * exact


def test_jump_model_runs(jd_model, quick):
    res = first_exit(jd_model, quick, -1.0, 1.0)
    assert res.censor_rate < 0.01
    # downward jumps produce overshoots below the lower level
    assert np.any(res.status == 3)
    assert np.all(res.x[res.status == 3] < -1.0)


def test_ks_distance_atoms(twopoint_measure):
    exact = np.array([-1.0] * 500 + [1.0] * 500)
    assert ks_distance(exact, twopoint_measure) < 1e-12
    shifted = np.full(1000, 0.5)
    assert ks_distance(shifted, twopoint_measure) == pytest.approx(0.5)


def test_ks_distance_continuous(uniform_measure):
    rng = np.random.default_rng(0)
    xs = rng.uniform(-1.0, 1.0, 4000)
    assert ks_distance(xs, uniform_measure) < 0.035
    assert ks_distance(xs + 0.5, uniform_measure) > 0.2


def test_validate_report_fields(bm_model, bm_scale, twopoint_measure, quick):
    bd = sn.build_two_sided(twopoint_measure, bm_scale)
    res = run_stop_T_tilde(bd, bm_model, quick)
    rep = validate(res, twopoint_measure, scale=bm_scale, boundary=bd,
                   xlaw=sn.ExcursionLaw(bm_scale))
    d = rep.to_dict()
    for key in ("n_paths", "ks", "mean_x", "mean_l", "expected_l",
                "max_survival_dev", "backend"):
        assert key in d
    assert d["expected_l"] == pytest.approx(1.0, abs=1e-9)
    assert abs(d["mean_l"] - 1.0) < 0.1
