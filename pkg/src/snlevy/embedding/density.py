"""Two-sided boundary for targets with a positive density.

Works for any Gaussian coefficient, including zero. A pairing function
g maps each upper support level y to the lower level g(y) reached by
the same sweep of excursions; it solves an ordinary differential
equation driven by the scale function and the target density. The
boundaries follow from two explicit local-time clocks built on g and
its inverse h.
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import AdmissibilityError, DomainError, NumericError
from ..excursion import ExcursionLaw
from ..measure import TargetMeasure
from ..scale import ScaleFunction
from .boundary import (Boundary, attach_hazards, clock_truncation,
                       ell_grid, invert_monotone)

# terminal admissibility: g must land within this many steps' travel
# of the lower support end
TERMINAL_SLACK = 50.0


def _slope(scale: ScaleFunction, measure: TargetMeasure,
           y: float, g: float) -> float:
    wg = scale.w(-g)
    if wg <= 0.0:
        raise NumericError("pairing ODE hit W(-g) = 0; refine the start")
    fy = measure.density(y)
    fg = measure.density(g)
    if fg < 1e-10 * measure.density_sup:
        raise NumericError(
            f"target density vanishes at paired level {g:.6g}")
    return -(scale.w(y - g) - wg) / wg * fy / fg


def solve_pairing(measure: TargetMeasure, scale: ScaleFunction,
                  n_steps: int = 8192) -> tuple:
    """Solve the pairing ODE g' = -[(W(y-g)-W(-g))/W(-g)] f(y)/f(g).

    Returns (ys, gs) on a uniform grid over [0, b_mu). Raises
    AdmissibilityError when g fails to reach the lower support end
    a_mu as y approaches b_mu, and NumericError when the density
    degenerates mid-run.

    Near zero the ODE is singular for models with a Gaussian part; the
    expansion g(y) ~ -sqrt(f(0+)/f(0-)) y seeds the first step.
    """
    if measure.has_atoms:
        raise DomainError("density construction needs an atom-free target")
    a_mu, b_mu = measure.a_mu, measure.b_mu
    if not (a_mu < 0 < b_mu):
        raise DomainError("density construction needs mass on both sides")
    if not hasattr(measure, "density_sup"):
        measure.density_sup = float(np.max(measure._density_grid))

    dy = b_mu / n_steps
    ys = np.linspace(0.0, b_mu, n_steps + 1)
    gs = np.empty_like(ys)
    gs[0] = 0.0
    if scale.model.sigma2 > 0:
        f0p = measure.density(dy * 0.5)
        f0m = measure.density(-dy * 0.5)
        gs[1] = -math.sqrt(f0p / f0m) * dy
    else:
        # bounded-variation case: W(0+) > 0 removes the singularity
        gs[1] = gs[0] + dy * _slope(scale, measure, 0.0 + 1e-12, -1e-12)
    margin = abs(a_mu) * 1e-12
    for i in range(1, n_steps):
        y, g = ys[i], gs[i]
        try:
            k1 = _slope(scale, measure, y, g)
            k2 = _slope(scale, measure, y + dy / 2, max(g + dy / 2 * k1,
                                                        a_mu + margin))
            k3 = _slope(scale, measure, y + dy / 2, max(g + dy / 2 * k2,
                                                        a_mu + margin))
            k4 = _slope(scale, measure, y + dy, max(g + dy * k3,
                                                    a_mu + margin))
        except NumericError:
            if i >= n_steps - 2:
                gs[i + 1:] = a_mu
                break
            raise
        g_next = g + dy / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
        if g_next < a_mu:
            # blow-through: the sweep exhausted the lower support early
            if i < n_steps - max(2, int(TERMINAL_SLACK)):
                raise AdmissibilityError(
                    "pairing reached the lower support end before the "
                    "upper one; target not admissible for this rule",
                    lhs=float(y), rhs=float(a_mu))
            gs[i + 1:] = a_mu
            break
        gs[i + 1] = g_next
    else:
        slope_end = (gs[-1] - gs[-2]) / dy
        gap = abs(gs[-1] - a_mu)
        if gap > TERMINAL_SLACK * dy * max(abs(slope_end), 1.0):
            raise AdmissibilityError(
                "pairing did not reach the lower support end",
                lhs=float(gs[-1]), rhs=float(a_mu))
        gs[-1] = a_mu
    return ys, gs


def build_boundary(measure: TargetMeasure, scale: ScaleFunction,
                   n_steps: int = 8192) -> Boundary:
    """Boundary for the plain first-passage rule from the pairing ODE."""
    ys, gs = solve_pairing(measure, scale, n_steps)
    b_mu = measure.b_mu
    tail = measure.tail

    # geometric head: the clocks are power laws at the support edges,
    # so the uniform ODE grid alone under-resolves their inverses; the
    # pairing map is interpolated onto the extra points (it is linear
    # to leading order near zero, which the interpolation preserves)
    ys_fine = np.unique(np.concatenate(
        [ys, np.geomspace(b_mu * 1e-12, b_mu * 0.05, 512)]))
    gs = np.interp(ys_fine, ys, gs)
    ys = ys_fine

    f_pos = np.asarray(measure.density(ys))
    w_ys = np.asarray(scale.w(ys))
    tail_y = np.asarray(tail(ys))
    tail_gy = np.asarray(tail(gs))
    with np.errstate(divide="ignore", invalid="ignore"):
        integ_p = w_ys * f_pos / (1.0 + tail_y - tail_gy)
    psi_p = np.zeros_like(ys)
    psi_p[1:] = np.cumsum(0.5 * (integ_p[1:] + integ_p[:-1]) * np.diff(ys))

    # lower clock on z = -s for s in the negative support, via h = g^{-1}
    xs = np.unique(np.concatenate(
        [np.linspace(measure.a_mu, 0.0, n_steps + 1),
         -np.geomspace(-measure.a_mu * 1e-12, -measure.a_mu * 0.05, 512)]))
    h_of_x = np.interp(xs, gs[::-1], ys[::-1])
    f_neg = np.asarray(measure.density(xs))
    w_h = np.asarray(scale.w(h_of_x))
    w_mx = np.asarray(scale.w(-xs))
    w_hmx = np.asarray(scale.w(h_of_x - xs))
    tail_h = np.asarray(tail(h_of_x))
    tail_x = np.asarray(tail(xs))
    with np.errstate(invalid="ignore", divide="ignore"):
        integ_m = np.where(
            w_hmx - w_mx > 0,
            w_h * w_mx * f_neg / ((w_hmx - w_mx)
                                  * (1.0 + tail_h - tail_x)),
            0.0)
    # integrate toward more negative x: psi_minus(z) = int_{-z}^0
    psi_m = np.zeros_like(xs)
    rev = integ_m[::-1]
    psi_m[1:] = np.cumsum(0.5 * (rev[1:] + rev[:-1]) * np.diff(-xs[::-1]))

    surv = tail_y + np.asarray(measure.cdf(gs))
    l_max = clock_truncation(psi_p, surv)
    ell = ell_grid(l_max)

    fplus = invert_monotone(ys, psi_p, ell)
    fminus = invert_monotone(-xs[::-1], psi_m, ell)
    fplus = np.maximum.accumulate(np.clip(fplus, 0.0, b_mu))
    fminus = np.maximum.accumulate(np.clip(fminus, 0.0, -measure.a_mu))
    meta = {"pairing": (ys, gs), "l_max": float(l_max)}
    bd = Boundary("two-sided-passage", ell, fplus, fminus, meta)
    return attach_hazards(bd, ExcursionLaw(scale))
