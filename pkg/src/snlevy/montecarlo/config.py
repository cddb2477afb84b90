"""Simulation configuration and per-path records."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import DomainError


@dataclass(frozen=True)
class SimConfig:
    """Parameters of a path-simulation run.

    Parameters
    ----------
    dt : float
        Base time step inside the local-time band; sub-stepped to
        dt/16 near active stop levels and stretched in the far field
        (capped at ``accel_cap`` times dt).
    t_max : float
        Censoring horizon; paths still running at t_max are recorded
        as censored.
    n_paths : int
    seed : int
        Root seed; every path gets its own counter-based streams, so
        results do not depend on scheduling order.
    eps : float or None
        Half-width of the occupation band of the local-time estimator;
        defaults to sqrt(dt).
    accel_cap : float
        Maximum far-field step as a multiple of dt; 1 forces a strict
        dt grid.
    res_cut_mult : float
        Multiple of the path-resolution scale (eps + 4*sigma*sqrt(dt))
        below which boundary crossings are stopped by their exact
        local-time intensity instead of path detection; 0 disables
        intensity-based stopping.
    """

    dt: float = 1e-5
    t_max: float = 10.0
    n_paths: int = 1000
    seed: int = 0
    eps: float | None = None
    accel_cap: float = 65536.0
    res_cut_mult: float = 6.0

    def __post_init__(self):
        if self.dt <= 0:
            raise DomainError("dt must be positive")
        if self.t_max <= 0:
            raise DomainError("t_max must be positive")
        if self.n_paths <= 0:
            raise DomainError("n_paths must be positive")
        if self.accel_cap < 1:
            raise DomainError("accel_cap must be at least 1")
        if self.res_cut_mult < 0:
            raise DomainError("res_cut_mult must be nonnegative")
        eps = self.eps
        if eps is None:
            eps = math.sqrt(self.dt)
            object.__setattr__(self, "eps", eps)
        if eps < math.sqrt(self.dt) / 10.0:
            raise DomainError(
                "band half-width below sqrt(dt)/10: the occupation "
                "estimator cannot resolve the band at this step size")

    def res_cut(self, sigma: float) -> float:
        """Boundary level below which stops switch to intensity draws."""
        return self.res_cut_mult * (self.eps + 4.0 * sigma * math.sqrt(self.dt))


@dataclass
class PathRecord:
    """One recorded trajectory (grid epochs plus exact jump epochs).

    `sign` is the current excursion sign per epoch: 0 inside the band,
    +1/-1 outside; `armed` flags the undershoot-wait state of the
    signed stopping rule.
    """

    times: np.ndarray
    xs: np.ndarray
    lhat: np.ndarray
    sign: np.ndarray
    armed: np.ndarray
    status: int
    stop_time: float = field(default=np.nan)
    stop_x: float = field(default=np.nan)

    @property
    def censored(self) -> bool:
        return self.status == 4

    @property
    def stopped_up(self) -> bool:
        return self.status == 1
