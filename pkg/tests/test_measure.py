"""Target-measure construction, CDF/quantile machinery, integration."""

import numpy as np
import pytest

import snlevy as sn
from snlevy.errors import DomainError


def test_uniform_basics(uniform_measure):
    u = uniform_measure
    assert u.a_mu == -1.0 and u.b_mu == 1.0
    assert not u.has_atoms
    assert u.cdf(0.0) == pytest.approx(0.5, abs=1e-12)
    assert u.quantile(0.25) == pytest.approx(-0.5, abs=1e-9)
    assert u.tail(0.5) == pytest.approx(0.25, abs=1e-9)
    assert u.mean() == pytest.approx(0.0, abs=1e-9)
    assert u.second_moment() == pytest.approx(1.0 / 3.0, abs=1e-5)


def test_twopoint_atoms(twopoint_measure):
    tp = twopoint_measure
    assert tp.has_atoms
    assert tp.cdf(1.0) == 1.0
    assert tp.cdf_left(1.0) == 0.5
    assert tp.cdf(-1.0) == 0.5
    assert tp.cdf_left(-1.0) == 0.0
    assert tp.mean() == pytest.approx(0.0, abs=1e-12)
    assert tp.second_moment() == pytest.approx(1.0, abs=1e-12)


def test_exp_truncation(exp_measure):
    e = exp_measure
    # support truncated where the tail drops below 1e-8
    assert e.a_mu == 0.0
    assert 18.0 < e.b_mu < 19.0
    assert e.mean() == pytest.approx(1.0, abs=1e-5)
    assert e.tail(1.0) == pytest.approx(np.exp(-1.0), abs=1e-6)


def test_mixture_atoms_and_density():
    m = sn.measure_from_dict({
        "atoms": [[2.0, 0.25]],
        "density": {"kind": "uniform", "a": -1.0, "b": 0.5},
    })
    # density piece is scaled to the remaining 0.75 mass
    assert m.cdf(0.5) == pytest.approx(0.75, abs=1e-9)
    assert m.cdf(2.0) == pytest.approx(1.0, abs=1e-12)
    assert m.integrate(lambda x: np.ones_like(x)) == pytest.approx(
        1.0, abs=1e-9)


def test_quantile_inverts_cdf(uniform_measure):
    for q in (0.1, 0.37, 0.5, 0.92):
        x = uniform_measure.quantile(q)
        assert uniform_measure.cdf(x) == pytest.approx(q, abs=1e-6)


def test_table_density():
    m = sn.measure_from_dict({
        "density": {"kind": "table", "xs": [-1.0, 0.0, 1.0],
                    "fs": [0.0, 1.0, 0.0]}})
    assert m.mean() == pytest.approx(0.0, abs=1e-9)
    assert m.cdf(0.0) == pytest.approx(0.5, abs=1e-9)


def test_validation_errors():
    with pytest.raises(DomainError):
        sn.measure_from_dict({"atoms": [[1.0, 0.5]]})  # mass != 1
    with pytest.raises(DomainError):
        sn.measure_from_dict({"atoms": [[1.0, 1.0]], "bogus": 1})
    with pytest.raises(DomainError):
        sn.measure_from_dict({"density": {"kind": "nope"}})


def test_integrate_respects_bounds(twopoint_measure):
    total = twopoint_measure.integrate(lambda x: np.ones_like(x), lo=0.0)
    assert total == pytest.approx(0.5, abs=1e-12)
