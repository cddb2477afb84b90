"""Expected-local-time quantities behind minimality of the stopping rules.

v(x, y) is the expected local time spent at level y before first
hitting zero when starting from x; its average against the target and
the supremum of that average give the least expected local time at
zero any embedding can achieve. This module evaluates those analytic
quantities; the competing level-based stopping rule they define is not
simulated.
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import UnsupportedError
from ..measure import TargetMeasure
from ..scale import ScaleFunction


class LocalTimeFunctional:
    """Expected local time at a level before hitting zero, and averages.

    Parameters
    ----------
    measure : TargetMeasure
    scale : ScaleFunction
    n_grid : int
        Size of the level grid used to tabulate the average V and to
        locate its supremum.
    """

    def __init__(self, measure: TargetMeasure, scale: ScaleFunction,
                 n_grid: int = 2001):
        self.measure = measure
        self.scale = scale
        self.psi1 = scale.model.psi_derivatives_at_zero()[0]
        lo = min(measure.a_mu, -1.0)
        hi = max(measure.b_mu, 1.0)
        self.y_grid = np.linspace(lo, hi, n_grid)
        self.v_mu = np.asarray([self.average(y) for y in self.y_grid])
        i = int(np.argmax(self.v_mu))
        self.lambda_mu = float(self.v_mu[i])
        self.argmax_y = float(self.y_grid[i])

    def v(self, x, y: float):
        """Expected local time at y before hitting zero, from x.

        Vectorised over x.
        """
        w = self.scale.w
        x = np.asarray(x, dtype=float)
        out = w(x) + w(-y) - w(x - y) - w(x) * w(-y) * self.psi1
        if np.ndim(out) == 0:
            return float(out)
        return out

    def vq(self, q: float, x: float, y: float) -> float:
        """Discounted version, through the potential density."""
        uq = self.scale.potential_density_uq
        return (uq(q, y - x)
                - uq(q, y) * uq(q, -x) / uq(q, 0.0))

    def average(self, y: float) -> float:
        """V(y): the target-average of v(., y)."""
        return self.measure.integrate(lambda x: self.v(x, y))

    def ratio(self, x: float) -> float:
        """lambda / (lambda - V(x)), the level-rule stopping weight."""
        vx = float(np.interp(x, self.y_grid, self.v_mu))
        denom = self.lambda_mu - vx
        if denom <= 0:
            return math.inf
        return self.lambda_mu / denom


def expected_inverse_local_time(model) -> float:
    """Mean of the inverse local time just before its terminal jump.

    Equals psi''(0+)/psi'(0+)^2; finite only for upward-drifting
    models with a finite second moment.
    """
    psi1, psi2 = model.psi_derivatives_at_zero()
    if psi1 <= 0:
        raise UnsupportedError("requires upward drift")
    if not math.isfinite(psi2):
        raise UnsupportedError("requires a finite second moment")
    return psi2 / psi1 ** 2
