"""Stopping-boundary container and local-time laws.

A boundary is a pair of non-decreasing right-continuous functions
phi_plus and phi_minus of the local time at zero. The stopping rules
halt the path at X = phi_plus(L) (upward, exact hit) or at
-phi_minus(L) (downward, with rule-dependent jump handling).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import DomainError

# local-time tables are truncated once the analytic survival
# probability of L_T drops below this level
SURVIVAL_CUTOFF = 1e-6


@dataclass(frozen=True)
class Boundary:
    """Pair of stopping boundaries tabulated on a local-time grid.

    Parameters
    ----------
    variant : str
        Which construction produced it: "two-sided-signed" (undershoot
        -wait rule), "two-sided-passage" (plain first passage), or
        "one-sided".
    ell : ndarray
        Increasing local-time breakpoints, starting at 0.
    fplus : ndarray or None
        Values of phi_plus on `ell`; None if there is no upper boundary.
    fminus : ndarray or None
        Values of phi_minus on `ell` (positive magnitudes); None if
        there is no lower boundary.
    """

    variant: str
    ell: np.ndarray
    fplus: np.ndarray | None
    fminus: np.ndarray | None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if np.any(np.diff(self.ell) < 0):
            raise DomainError("local-time grid must be non-decreasing")
        for v in (self.fplus, self.fminus):
            if v is not None and np.any(np.diff(v) < -1e-12):
                raise DomainError("boundaries must be non-decreasing")

    @property
    def has_up(self) -> bool:
        return self.fplus is not None

    @property
    def has_down(self) -> bool:
        return self.fminus is not None

    def phi_plus(self, l) -> float | np.ndarray:
        if self.fplus is None:
            raise DomainError("boundary has no upper part")
        return np.interp(l, self.ell, self.fplus)

    def phi_minus(self, l) -> float | np.ndarray:
        if self.fminus is None:
            raise DomainError("boundary has no lower part")
        return np.interp(l, self.ell, self.fminus)


def clustered_grid(a: float, b: float, n: int) -> np.ndarray:
    """Uniform grid on [a, b] refined geometrically toward both ends.

    The local-time clocks behave like power laws at the support
    endpoints, so plain trapezoid quadrature needs the extra points
    there to stay accurate.
    """
    lin = np.linspace(a, b, n + 1)
    span = b - a
    geo = np.geomspace(span * 1e-12, span * 0.05, max(n // 8, 16))
    return np.unique(np.concatenate([lin, a + geo, b - geo]))


def clock_truncation(psi: np.ndarray, surv: np.ndarray) -> float:
    """Clock value where the analytic survival crosses the cutoff.

    `surv` must be non-increasing along the table; +inf clock entries
    (vertical asymptotes) are stepped over.
    """
    idx = int(np.searchsorted(-surv, -SURVIVAL_CUTOFF))
    idx = min(max(idx, 1), len(psi) - 1)
    while idx > 0 and not np.isfinite(psi[idx]):
        idx -= 1
    val = psi[idx]
    if not np.isfinite(val):
        finite = psi[np.isfinite(psi)]
        val = finite[-1] if len(finite) else 1.0
    return float(max(val, 1e-9))


def ell_grid(l_max: float) -> np.ndarray:
    """Local-time evaluation grid, dense near zero where boundaries
    can rise steeply."""
    l_max = max(l_max, 1e-9)
    # boundaries behave like powers of ell near zero, so a linear head
    # under-resolves them and any downstream 1/phi integral blows up
    return np.unique(np.concatenate(
        [[0.0], np.linspace(0.0, l_max, 769),
         np.geomspace(max(l_max * 1e-13, 1e-300), l_max, 640)]))


def invert_monotone(xs: np.ndarray, vals: np.ndarray,
                    targets: np.ndarray) -> np.ndarray:
    """Right-continuous inverse of a non-decreasing table.

    Returns inf{x : vals(x) > t} for each target t, where vals is the
    piecewise-linear monotone function through (xs, vals); +inf entries
    in vals mark a vertical asymptote at the corresponding x.
    """
    finite = np.isfinite(vals)
    xf, vf = xs[finite], vals[finite]
    i1 = np.searchsorted(vf, targets, side="right")
    i0 = np.clip(i1 - 1, 0, len(vf) - 1)
    i1 = np.clip(i1, 0, len(vf) - 1)
    dv = vf[i1] - vf[i0]
    with np.errstate(invalid="ignore", divide="ignore"):
        t = np.where(dv > 0, (targets - vf[i0]) / np.where(dv > 0, dv, 1.0),
                     1.0)
    out = xf[i0] + np.clip(t, 0.0, 1.0) * (xf[i1] - xf[i0])
    out = np.where(targets < vf[0], xf[0], out)
    # targets beyond the last finite value sit on the asymptote (the
    # first x where vals is infinite), or clamp at the table end
    if finite.all():
        hi = xs[-1]
    else:
        hi = xs[np.argmin(finite)]
    out = np.where(targets >= vf[-1], hi, out)
    return out


def _side_rates(boundary: Boundary, xlaw, fine: np.ndarray):
    """Upward and downward stopping intensities along the boundary.

    Splits the total excursion-measure stopping intensity by which side
    fires: upward stops have rate n(sup >= phi_plus); downward stops
    have the rule-dependent complement (signed-maximum mass for the
    signed rule, the joint up-miss/down-hit mass for the plain passage
    rule).  Rates at points where a boundary is still zero are +inf.
    """
    def rate_up(l: float) -> float:
        if not boundary.has_up:
            return 0.0
        up = float(boundary.phi_plus(l))
        return np.inf if up <= 0 else xlaw.n_sup_ge(up)

    def rate_dn(l: float) -> float:
        if not boundary.has_down:
            return 0.0
        dn = float(boundary.phi_minus(l))
        if dn <= 0:
            return np.inf
        if boundary.variant == "two-sided-signed":
            return xlaw.n_signed_max(dn)[1]
        if not boundary.has_up:
            return xlaw.n_inf_le(dn)
        up = float(boundary.phi_plus(l))
        return np.inf if up <= 0 else xlaw.n_joint(up, dn)

    r_up = np.asarray([rate_up(l) for l in fine])
    r_dn = np.asarray([rate_dn(l) for l in fine])
    # integrable singularities at l=0 (boundaries starting at zero):
    # the first node sits at or next to the singularity and any finite
    # value there still distorts the head trapezoid, so it is always
    # replaced by its neighbour (a no-op when the rate is regular)
    for r in (r_up, r_dn):
        if len(r) > 1:
            r[0] = r[1]
    return r_up, r_dn


def _hazard_grid(ell: np.ndarray) -> np.ndarray:
    l_max = float(ell[-1])
    if l_max <= 0:
        return ell
    head = np.geomspace(max(l_max * 1e-13, 1e-300), l_max, 640)
    return np.unique(np.concatenate([ell, head]))


def attach_hazards(boundary: Boundary, xlaw) -> Boundary:
    """Tabulate cumulative stopping hazards on the boundary's grid.

    Stores, in ``boundary.meta``, H_up(l) and H_dn(l), the integrals of
    the side-split stopping intensities from 0 to l.  The simulation
    kernel uses their increments to stop exactly in law while a
    boundary sits below the spatial resolution of path detection.
    """
    ell = boundary.ell
    fine = _hazard_grid(ell)
    r_up, r_dn = _side_rates(boundary, xlaw, fine)
    dl = np.diff(fine)

    def cum(rates):
        vals = np.concatenate(
            ([0.0], np.cumsum(0.5 * (rates[1:] + rates[:-1]) * dl)))
        return np.interp(ell, fine, vals)

    if boundary.has_up:
        boundary.meta["hazard_up"] = cum(r_up)
    if boundary.has_down:
        boundary.meta["hazard_dn"] = cum(r_dn)
    return boundary


def law_of_local_time(boundary: Boundary, xlaw, ks: np.ndarray,
                      n_sub: int = 8) -> np.ndarray:
    """Survival function P(L_T > k) of the local time at the stop.

    Integrates the excursion-measure stopping intensity along the
    boundary: the survival equals exp(-int_0^k [n(M > phi_plus) +
    n(M < -phi_minus)] dl) with the one-sided variant dropping the
    second term.

    Parameters
    ----------
    boundary : Boundary
    xlaw : ExcursionLaw
    ks : ndarray
        Evaluation points, non-negative.
    n_sub : int
        Trapezoid subdivisions between consecutive evaluation points.
    """
    ks = np.asarray(ks, dtype=float)
    if np.any(ks < 0):
        raise DomainError("local-time levels must be nonnegative")
    grid = np.unique(np.concatenate([[0.0], ks]))
    fine = [np.asarray([0.0])]
    k_max = grid[-1]
    if k_max > 0:
        # geometric head resolves the integrable 1/sqrt singularity of
        # the downward rate when the boundary starts at zero
        fine.append(np.geomspace(k_max * 1e-12, k_max * 1e-2, 320))
    for a, b in zip(grid[:-1], grid[1:]):
        fine.append(np.linspace(a, b, n_sub + 1)[1:])
    fine = np.unique(np.concatenate(fine))

    r_up, r_dn = _side_rates(boundary, xlaw, fine)
    rates = r_up + r_dn
    if len(rates) > 1 and not np.isfinite(rates[0]):
        rates[0] = rates[1]
    cum = np.concatenate(([0.0], np.cumsum(
        0.5 * (rates[1:] + rates[:-1]) * np.diff(fine))))
    surv_fine = np.exp(-cum)
    return np.interp(ks, fine, surv_fine)
