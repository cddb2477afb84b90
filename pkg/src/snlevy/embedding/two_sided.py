"""Two-sided boundary construction for targets charging both half-lines.

Requires a Gaussian component. The construction balances the measure's
positive and negative parts in local-time scale: a transport map alpha
pairs upper and lower quantiles, a clock xi converts quantile mass into
local time, and the stopping boundaries are the quantiles read along
that clock. The downward rule waits out jump undershoots: inside a
negative excursion a jump below the boundary does not stop the path,
the continuous return to the boundary level does.
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import AdmissibilityError, DomainError, UnsupportedError
from ..excursion import ExcursionLaw
from ..measure import TargetMeasure
from ..scale import ScaleFunction
from .boundary import (Boundary, SURVIVAL_CUTOFF, attach_hazards,
                       clock_truncation, clustered_grid, ell_grid,
                       invert_monotone)


def _require_gaussian(scale: ScaleFunction):
    if scale.model.sigma2 == 0:
        raise UnsupportedError(
            "the signed two-sided construction needs a Gaussian component")


def _cumtrapz(y: np.ndarray, x: np.ndarray) -> np.ndarray:
    out = np.zeros_like(y)
    out[1:] = np.cumsum(0.5 * (y[1:] + y[:-1]) * np.diff(x))
    return out


def expected_local_time(measure: TargetMeasure,
                        scale: ScaleFunction) -> float:
    """E[L_T] = integral of W over the positive part of the target."""
    return measure.integrate(lambda x: scale.w(x), lo=0.0)


def check_admissible(measure: TargetMeasure, scale: ScaleFunction) -> dict:
    """Balance condition for the two-sided construction.

    The positive side integral of W must equal W'(0) times the negative
    side integral of W(-s)/W'(-s).
    """
    _require_gaussian(scale)
    lhs = expected_local_time(measure, scale)
    rhs = scale.w_prime_at_zero * measure.integrate(
        lambda x: scale.w(-x) / scale.w_prime(-x), hi=0.0)
    ok = abs(lhs - rhs) <= 1e-6 * max(lhs, rhs, 1.0)
    return {"ok": ok, "lhs": lhs, "rhs": rhs}


def check_integrability(measure: TargetMeasure, scale: ScaleFunction) -> dict:
    """Sufficient condition for a finite expected stopping time.

    Needs upward drift, a finite second moment of the process, and
    finiteness of the two tail integrals reported here.
    """
    psi1, psi2 = scale.model.psi_derivatives_at_zero()
    i_pos = measure.integrate(lambda y: y * scale.w(y), lo=0.0)
    i_neg = measure.integrate(
        lambda y: y * scale.w(-y) / scale.w_prime(-y), hi=0.0)
    finite = (psi1 > 0 and math.isfinite(psi2)
              and math.isfinite(i_pos) and math.isfinite(i_neg))
    return {"finite_ET": bool(finite), "i_pos": i_pos, "i_neg": i_neg,
            "value_bound": i_pos - i_neg}


def shift_embedding(measure: TargetMeasure, model) -> tuple:
    """Recentre a target for a Brownian-motion-with-drift model.

    Returns (shifted measure, offset c). The shifted measure satisfies
    the balance condition for the same model; embedding it after first
    hitting c embeds the original target.
    """
    if model.jump_rate != 0 or model.sigma2 <= 0 or model.drift <= 0:
        raise UnsupportedError(
            "the shift remedy applies to Gaussian models with positive "
            "drift and no jumps")
    delta = model.drift / model.sigma2
    m = measure.integrate(lambda x: 1.0 - np.exp(-2.0 * delta * x))
    if m >= 1.0:
        raise DomainError("target not embeddable by a shift (mass >= 1)")
    if m < -1e-12:
        raise DomainError("shift remedy needs a nonnegative defect")
    c = -math.log1p(-max(m, 0.0)) / (2.0 * delta)
    atoms = [(x - c, w) for x, w in measure.atoms]
    pieces = [type(p)(p.xs - c, p.fs, p.weight) for p in measure.pieces]
    return TargetMeasure(atoms=atoms, pieces=pieces), c


def _quantile_grid(n: int) -> np.ndarray:
    """Open grid on (0,1), geometrically refined toward both ends."""
    lin = np.linspace(0.0, 1.0, n + 1)[1:-1]
    geo = np.geomspace(1e-12, 0.05, n // 8)
    return np.unique(np.concatenate([geo, lin, 1.0 - geo]))


def build_boundary(measure: TargetMeasure, scale: ScaleFunction,
                   n_grid: int = 4096) -> Boundary:
    """Boundary for the signed two-sided rule, general (quantile) path.

    Works for atomic and continuous targets alike; the quantile
    function is constant across an atom's mass interval, which is
    exactly the flat piece the construction needs.
    """
    _require_gaussian(scale)
    adm = check_admissible(measure, scale)
    if not adm["ok"]:
        raise AdmissibilityError(
            "target fails the admissibility balance",
            lhs=adm["lhs"], rhs=adm["rhs"])
    a_star = measure.a_star
    if not 0.0 < a_star < 1.0:
        raise DomainError("two-sided construction needs mass on both sides")
    wp0 = scale.w_prime_at_zero

    u = _quantile_grid(n_grid)
    sp = a_star + (1.0 - a_star) * u          # upper quantile levels
    sn = a_star * u                            # lower quantile levels
    qp = np.maximum(np.asarray(measure.quantile(sp)), 0.0)
    qn = np.minimum(np.asarray(measure.quantile(sn)), 0.0)
    w_pos = np.asarray(scale.w(qp))
    g_neg = wp0 * np.asarray(scale.w(-qn)) / np.asarray(scale.w_prime(-qn))

    # transport map: alpha(a) solves D(a) = G(alpha), with D growing
    # from a_star upward and G growing from a_star downward
    D = _cumtrapz(w_pos, sp)
    G_desc = _cumtrapz(g_neg[::-1], -sn[::-1])  # from a_star down to 0
    alpha = np.interp(D, G_desc, sn[::-1])
    alpha_inv = np.interp(G_desc, D, sp)        # maps lower levels upward

    # local-time clock on both sides
    xi_p = _cumtrapz(w_pos / (alpha + 1.0 - sp), sp)
    integ_n = g_neg[::-1] / (sn[::-1] + 1.0 - alpha_inv)
    xi_n = -_cumtrapz(integ_n, -sn[::-1])[::-1]  # negative, decreasing grid

    # truncate where the survival 1 - a + alpha(a) is negligible
    surv = 1.0 - sp + alpha
    l_max = clock_truncation(xi_p, surv)
    ell = ell_grid(l_max)

    s_all = np.concatenate([sn, sp])
    xi_all = np.concatenate([xi_n, xi_p])
    a_up = invert_monotone(s_all, xi_all, ell)
    a_dn = invert_monotone(s_all, xi_all, -ell)
    fplus = np.maximum(np.asarray(measure.quantile(a_up)), 0.0)
    # the downward side reads the lower quantile branch: at the split
    # level the left-continuous inverse picks the negative support
    fminus = np.maximum(-np.asarray(measure.quantile_left(a_dn)), 0.0)
    fplus = np.maximum.accumulate(fplus)
    fminus = np.maximum.accumulate(fminus)
    meta = {"a_star": a_star, "l_max": float(l_max),
            "survival_table": (xi_p.copy(), surv.copy())}
    bd = Boundary("two-sided-signed", ell, fplus, fminus, meta)
    return attach_hazards(bd, ExcursionLaw(scale))


def build_boundary_nonatomic(measure: TargetMeasure, scale: ScaleFunction,
                             n_grid: int = 4096) -> Boundary:
    """Fast path for atom-free targets, bypassing the quantile grid.

    Uses the mass-balance maps in state space: D on the positive
    support, G on the negative, and their cross-inverses. Agrees with
    the general path and serves as its cross-check.
    """
    _require_gaussian(scale)
    if measure.has_atoms:
        raise DomainError("fast path requires an atom-free target")
    adm = check_admissible(measure, scale)
    if not adm["ok"]:
        raise AdmissibilityError(
            "target fails the admissibility balance",
            lhs=adm["lhs"], rhs=adm["rhs"])
    wp0 = scale.w_prime_at_zero
    a_mu, b_mu = measure.a_mu, measure.b_mu
    if not (a_mu < 0 < b_mu):
        raise DomainError("two-sided construction needs mass on both sides")

    ys = clustered_grid(0.0, b_mu, n_grid)
    xs = clustered_grid(a_mu, 0.0, n_grid)
    f_pos = np.asarray(measure.density(ys))
    f_neg = np.asarray(measure.density(xs))
    w_ys = np.asarray(scale.w(ys))
    D = _cumtrapz(w_ys * f_pos, ys)
    g_int = wp0 * np.asarray(scale.w(-xs)) \
        / np.asarray(scale.w_prime(-xs)) * f_neg
    # G grows from 0 downward in x
    G = _cumtrapz(g_int[::-1], -xs[::-1])[::-1]

    g_of_y = np.interp(D, G[::-1], xs[::-1])    # lower partner of level y
    f_of_x = np.interp(G, D, ys)                 # upper partner of level x

    tail = measure.tail
    tail_y = np.asarray(tail(ys))
    tail_gy = np.asarray(tail(g_of_y))
    with np.errstate(divide="ignore", invalid="ignore"):
        psi_p = _cumtrapz(w_ys * f_pos / (1.0 + tail_y - tail_gy), ys)

    tail_x = np.asarray(tail(xs))
    tail_fx = np.asarray(tail(f_of_x))
    with np.errstate(divide="ignore", invalid="ignore"):
        num = g_int / (1.0 + tail_fx - tail_x)
    psi_m = _cumtrapz(num[::-1], -xs[::-1])      # in z = -x, increasing

    surv = tail_y + np.asarray(measure.cdf(g_of_y))
    l_max = clock_truncation(psi_p, surv)
    ell = ell_grid(l_max)

    fplus = invert_monotone(ys, psi_p, ell)
    fminus = invert_monotone(-xs[::-1], psi_m, ell)
    fplus = np.maximum.accumulate(np.maximum(fplus, 0.0))
    fminus = np.maximum.accumulate(np.maximum(fminus, 0.0))
    bd = Boundary("two-sided-signed", ell, fplus, fminus,
                  {"l_max": float(l_max)})
    return attach_hazards(bd, ExcursionLaw(scale))
