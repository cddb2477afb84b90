"""One-sided boundary for targets supported in the positive half-line.

The local-time clock is psi(y) = -int_[0,y) W(s) d(log tail(s)); the
boundary is its right-continuous inverse. Stopping happens at upward
passages only, so the running supremum at the stop equals the stopped
value.
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import DomainError
from ..excursion import ExcursionLaw
from ..measure import TargetMeasure
from ..scale import ScaleFunction
from .boundary import (Boundary, SURVIVAL_CUTOFF, attach_hazards, ell_grid,
                       invert_monotone)


def psi_table(measure: TargetMeasure, scale: ScaleFunction,
              n_grid: int = 8192) -> tuple:
    """Tabulate psi(y) = -int_[0,y) W d(log tail) on the upper support.

    Atoms contribute W(loc) * log(tail(loc)/tail(loc+)) at their
    location; density parts integrate W(s) f(s)/tail(s) ds. The value
    diverges where the tail vanishes; +inf entries mark that.
    """
    if measure.a_mu < 0 or measure.cdf(0.0) > 1e-12:
        raise DomainError("one-sided construction needs a positive target")
    b_mu = measure.b_mu
    # geometric head: the clock is a power law at the support edge and
    # a uniform grid alone leaves its inverse badly under-resolved there
    ys = np.unique(np.concatenate(
        [np.linspace(0.0, b_mu, n_grid + 1),
         np.geomspace(b_mu * 1e-12, b_mu * 0.05, 512),
         [x for x, _ in measure.atoms]]))
    dens = np.asarray(measure.density(ys))
    tails = np.asarray(measure.tail(ys))
    with np.errstate(divide="ignore", invalid="ignore"):
        integ = np.where(tails > 0,
                         np.asarray([scale.w(v) for v in ys])
                         * dens / np.maximum(tails, 1e-300),
                         np.inf)
    psi = np.zeros_like(ys)
    seg = 0.5 * (integ[1:] + integ[:-1]) * np.diff(ys)
    psi[1:] = np.cumsum(np.where(np.isfinite(seg), seg, np.inf))
    # atom at loc adds a jump just beyond loc: psi integrates over [0,y)
    for loc, _ in measure.atoms:
        t_before = float(measure.tail(loc))
        t_after = t_before - dict(measure.atoms)[loc]
        jump = (math.inf if t_after <= 0
                else scale.w(loc) * math.log(t_before / t_after))
        psi[ys > loc] += jump
    return ys, psi


def build_boundary(measure: TargetMeasure, scale: ScaleFunction,
                   n_grid: int = 8192) -> Boundary:
    """Boundary for the upward-only passage rule."""
    ys, psi = psi_table(measure, scale, n_grid)
    finite = np.isfinite(psi)
    surv = np.asarray(measure.tail(ys[finite]))
    keep = surv >= SURVIVAL_CUTOFF
    if keep.any():
        l_max = float(np.max(psi[finite][keep]))
    else:
        l_max = float(psi[finite][-1])
    l_max = max(l_max, 1e-9)
    ell = ell_grid(l_max)
    fplus = invert_monotone(ys, psi, ell)
    fplus = np.maximum.accumulate(np.maximum(fplus, 0.0))
    bd = Boundary("one-sided", ell, fplus, None,
                  {"l_max": l_max, "psi_table": (ys, psi)})
    return attach_hazards(bd, ExcursionLaw(scale))
