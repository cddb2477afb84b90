"""Excursion-measure functionals expressed through one scale function.

All quantities refer to the Ito measure n of excursions of the process
away from zero. Every formula delegates to a single ScaleFunction
instance so that grid, interpolation, and derivative conventions stay
internally consistent.
"""

from __future__ import annotations

import math

from .errors import DomainError, UnsupportedError
from .model import Regime
from .scale import ScaleFunction


class ExcursionLaw:
    """Evaluator of excursion-measure masses and expected hitting times.

    Parameters
    ----------
    scale : ScaleFunction
        Scale-function evaluator for the underlying model.
    """

    def __init__(self, scale: ScaleFunction):
        self.scale = scale
        self.model = scale.model
        self.psi1 = self.model.psi_derivatives_at_zero()[0]

    def _check_pos(self, **kw):
        for name, v in kw.items():
            if v <= 0:
                raise DomainError(f"{name} must be positive")

    def _phi_prime0(self) -> float:
        # finite only when the process drifts upward
        if self.model.regime is Regime.OSCILLATES:
            raise UnsupportedError(
                "this functional needs a finite derivative of the inverse "
                "exponent at zero, which oscillation rules out")
        return 1.0 / self.psi1

    # -- sup/inf masses --------------------------------------------------

    def n_sup_ge(self, eta: float) -> float:
        """Mass of excursions whose supremum reaches eta."""
        self._check_pos(eta=eta)
        return 1.0 / self.scale.w(eta)

    def n_inf_le(self, delta: float) -> float:
        """Mass of excursions whose infimum goes at or below -delta."""
        self._check_pos(delta=delta)
        return 1.0 / self.scale.w(delta) - self.psi1

    def n_joint(self, eta: float, delta: float) -> float:
        """Mass of {sup < eta, inf <= -delta}."""
        self._check_pos(eta=eta, delta=delta)
        w = self.scale.w
        return (w(eta + delta) / w(delta) - 1.0) / w(eta)

    def n_qjoint(self, q: float, eta: float, delta: float) -> float:
        """Discounted joint functional n(1 - 1{sup<eta, inf>-delta} e^{-q zeta})."""
        self._check_pos(eta=eta, delta=delta)
        if q < 0:
            raise DomainError("q must be nonnegative")
        wq = lambda x: self.scale.w_q(q, x)
        return wq(eta + delta) / (wq(eta) * wq(delta))

    def n_signed_max(self, a: float) -> tuple:
        """(mass of {M > a}, mass of {M < -a}) for the signed maximum M."""
        self._check_pos(a=a)
        if self.model.sigma2 == 0:
            raise UnsupportedError(
                "signed-maximum split needs a Gaussian component")
        w, wp = self.scale.w(a), self.scale.w_prime(a)
        up = 1.0 / w
        down = wp / (w * self.scale.w_prime_at_zero)
        return up, down

    # -- discounted and expected hitting --------------------------------

    def n_hit_up_q(self, q: float, eta: float) -> float:
        """n(e^{-q H_eta}; sup >= eta)."""
        self._check_pos(eta=eta)
        return 1.0 / self.scale.w_q(q, eta)

    def n_hit_down_q(self, q: float, eta: float, delta: float) -> float:
        """n(e^{-q H_{-delta}}; sup < eta, inf <= -delta)."""
        self._check_pos(eta=eta, delta=delta)
        wq = lambda x: self.scale.w_q(q, x)
        phi_q = self.model.phi(q)
        return (math.exp(phi_q * delta) / wq(eta)) * (
            wq(eta + delta) / wq(delta) - math.exp(phi_q * eta))

    def n_exp_hit_up(self, eta: float) -> float:
        """n(H_eta; sup >= eta) = (W*W)(eta) / W(eta)^2."""
        self._check_pos(eta=eta)
        w = self.scale.w(eta)
        return self.scale.conv_ww(eta) / (w * w)

    def n_exp_hit_down(self, eta: float, delta: float) -> float:
        """n(H_{-delta}; sup < eta, inf <= -delta)."""
        self._check_pos(eta=eta, delta=delta)
        w, ww = self.scale.w, self.scale.conv_ww
        dphi = self._phi_prime0()
        we, wd, wed = w(eta), w(delta), w(eta + delta)
        first = (ww(eta) / we ** 2 - delta * dphi / we) * (wed / wd - 1.0)
        second = (ww(eta + delta) / wd
                  - wed * ww(delta) / wd ** 2
                  - dphi * eta) / we
        return first - second

    def n_exp_hit_down_neg(self, delta: float) -> float:
        """n(H_{-delta}; sup = 0, inf <= -delta), negative excursions only."""
        self._check_pos(delta=delta)
        if self.model.sigma2 == 0:
            raise UnsupportedError(
                "negative excursions of this form need a Gaussian component")
        dphi = self._phi_prime0()
        wd = self.scale.w(delta)
        wpd = self.scale.w_prime(delta)
        return (dphi * (1.0 - delta * wpd / wd)
                + wpd * self.scale.conv_ww(delta) / wd ** 2
                - self.scale.conv_wwprime(delta) / wd
                ) / self.scale.w_prime_at_zero
