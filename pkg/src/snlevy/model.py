"""Spectrally negative Levy models: Laplace exponent, its inverse and regimes.

The process is ``X_t = sigma*B_t + drift*t - J_t`` where ``J`` is a
compound Poisson process with strictly positive jump sizes (so all jumps
of ``X`` are downward).  The Laplace exponent is

    psi(theta) = sigma^2 theta^2 / 2 + drift * theta
                 + rate * (E[exp(-theta * J)] - 1),   theta >= 0,

strictly convex with psi(0) = 0.  Models that drift to -infinity
(psi'(0+) < 0) are rejected at construction.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, NumericError, UnsupportedError

__all__ = [
    "JumpLaw",
    "LevyModel",
    "Regime",
    "model_from_dict",
    "model_from_json",
]


class Regime(enum.Enum):
    OSCILLATES = "oscillates"
    DRIFTS_TO_PLUS_INFINITY = "drifts_to_plus_infinity"


@dataclass(frozen=True)
class JumpLaw:
    """Law of the (positive) jump sizes of the compound Poisson part.

    kind is one of "exp" (exponential with given mean), "point" (a point
    mass) or "mixture" (finite mixture of the former two).
    """

    kind: str
    exp_mean: float = 0.0
    point: float = 0.0
    components: tuple = ()  # tuple of (weight, JumpLaw) for mixtures

    def __post_init__(self):
        if self.kind == "exp":
            if self.exp_mean <= 0:
                raise DomainError("exponential jump mean must be positive")
        elif self.kind == "point":
            if self.point <= 0:
                raise DomainError("point-mass jump size must be positive")
        elif self.kind == "mixture":
            if not self.components:
                raise DomainError("mixture needs at least one component")
            w = sum(c[0] for c in self.components)
            if abs(w - 1.0) > 1e-12:
                raise DomainError("mixture weights must sum to 1")
            if any(c[1].kind == "mixture" for c in self.components):
                raise DomainError("nested mixtures are not supported")
        else:
            raise DomainError(f"unknown jump law kind {self.kind!r}")

    # E[exp(-theta*J)], valid for complex theta as well (used by the
    # Laplace-inversion route for W).
    def mgf_neg(self, theta):
        if self.kind == "exp":
            return 1.0 / (1.0 + self.exp_mean * theta)
        if self.kind == "point":
            return np.exp(-theta * self.point)
        return sum(w * law.mgf_neg(theta) for w, law in self.components)

    def mean(self) -> float:
        if self.kind == "exp":
            return self.exp_mean
        if self.kind == "point":
            return self.point
        return sum(w * law.mean() for w, law in self.components)

    def second_moment(self) -> float:
        if self.kind == "exp":
            return 2.0 * self.exp_mean**2
        if self.kind == "point":
            return self.point**2
        return sum(w * law.second_moment() for w, law in self.components)

    def mean_above_one(self) -> float:
        """E[J * 1{J >= 1}], the tail-mean entering the constant of the
        undershoot bound."""
        if self.kind == "exp":
            m = self.exp_mean
            return (1.0 + m) * math.exp(-1.0 / m)
        if self.kind == "point":
            return self.point if self.point >= 1.0 else 0.0
        return sum(w * law.mean_above_one() for w, law in self.components)

    def sample(self, rng, size: int) -> np.ndarray:
        """Draw jump magnitudes; consumes a fixed number of variates per
        call so simulation streams stay reproducible."""
        if self.kind == "exp":
            return rng.exponential(self.exp_mean, size)
        if self.kind == "point":
            return np.full(size, self.point)
        # mixtures always consume one uniform and one exponential per
        # draw regardless of which component is selected
        u = rng.random(size)
        e = rng.exponential(1.0, size)
        out = np.zeros(size)
        lo = 0.0
        for w, law in self.components:
            hit = (u >= lo) & (u < lo + w)
            if law.kind == "exp":
                out[hit] = law.exp_mean * e[hit]
            else:
                out[hit] = law.point
            lo += w
        # float rounding can leave u marginally above the cumulative sum
        stray = u >= lo
        if np.any(stray):
            w, law = self.components[-1]
            out[stray] = law.exp_mean * e[stray] if law.kind == "exp" \
                else law.point
        return out


@dataclass(frozen=True)
class LevyModel:
    """Immutable description of the process; safe to share across workers."""

    sigma2: float
    drift: float
    jump_rate: float = 0.0
    jump_law: JumpLaw | None = None
    psi1: float = field(init=False)  # psi'(0+)
    psi2: float = field(init=False)  # psi''(0+)

    def __post_init__(self):
        if self.sigma2 < 0:
            raise DomainError("sigma2 must be nonnegative")
        if self.jump_rate < 0:
            raise DomainError("jump rate must be nonnegative")
        if self.jump_rate > 0 and self.jump_law is None:
            raise DomainError("positive jump rate needs a jump law")
        if self.sigma2 == 0 and self.jump_rate == 0:
            raise DomainError("degenerate model: no Gaussian part, no jumps")
        ej = self.jump_rate * self.jump_law.mean() if self.jump_rate > 0 else 0.0
        ej2 = self.jump_rate * self.jump_law.second_moment() if self.jump_rate > 0 else 0.0
        psi1 = self.drift - ej
        if psi1 < -1e-14:
            raise DomainError(
                f"model drifts to -infinity (psi'(0+) = {psi1:g}); rejected"
            )
        object.__setattr__(self, "psi1", max(psi1, 0.0))
        object.__setattr__(self, "psi2", self.sigma2 + ej2)

    # -- basic quantities -------------------------------------------------

    @property
    def sigma(self) -> float:
        return math.sqrt(self.sigma2)

    @property
    def regime(self) -> Regime:
        return Regime.OSCILLATES if self.psi1 == 0.0 else Regime.DRIFTS_TO_PLUS_INFINITY

    @property
    def simulable(self) -> bool:
        """Path simulation requires a Gaussian component (unbounded
        variation cannot come from finite-activity jumps alone)."""
        return self.sigma2 > 0

    def psi(self, theta):
        """Laplace exponent; accepts scalars, arrays or complex values."""
        theta = np.asarray(theta)
        if not np.iscomplexobj(theta) and np.any(theta < 0):
            raise DomainError("psi is evaluated for theta >= 0")
        val = 0.5 * self.sigma2 * theta**2 + self.drift * theta
        if self.jump_rate > 0:
            val = val + self.jump_rate * (self.jump_law.mgf_neg(theta) - 1.0)
        return val if val.ndim else float(val)

    def psi_prime(self, theta: float) -> float:
        h = 1e-7 * max(1.0, abs(theta))
        if theta < h:
            return (self.psi(theta + h) - self.psi(max(theta, 0.0))) / h
        return (self.psi(theta + h) - self.psi(theta - h)) / (2 * h)

    def psi_derivatives_at_zero(self) -> tuple[float, float]:
        """(psi'(0+), psi''(0+)); the second may be +inf only for laws with
        infinite second moment, which the supported families exclude."""
        return self.psi1, self.psi2

    def phi(self, q: float) -> float:
        """Largest root of psi(theta) = q (the right inverse of psi)."""
        if q < 0:
            raise DomainError("phi is defined for q >= 0")
        if q == 0.0:
            return 0.0  # Phi(0) = 0 since the model does not drift to -inf
        # bracket: psi is strictly increasing past Phi(0) = 0
        lo, hi = 0.0, max(1.0, q / max(self.psi_prime(1.0), 1e-12))
        it = 0
        while self.psi(hi) < q:
            hi *= 2.0
            it += 1
            if it > 200:
                raise NumericError("failed to bracket phi(q)")
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if self.psi(mid) < q:
                lo = mid
            else:
                hi = mid
            if hi - lo < 1e-14 * max(1.0, hi):
                break
        x = 0.5 * (lo + hi)
        # Newton polish
        for _ in range(8):
            d = self.psi_prime(x)
            if d <= 0:
                break
            step = (self.psi(x) - q) / d
            x -= step
            if abs(step) < 1e-15 * max(1.0, x):
                break
        if abs(self.psi(x) - q) > 1e-12 * max(1.0, q):
            raise NumericError("phi(q) root polish did not converge")
        return x

    def phi_prime(self, q: float) -> float:
        """Phi'(q) = 1/psi'(Phi(q)) for q > 0; at q = 0 it equals
        1/psi'(0+) for drifting models and diverges for oscillating ones."""
        if q < 0:
            raise DomainError("q >= 0 required")
        if q == 0.0:
            if self.psi1 > 0:
                return 1.0 / self.psi1
            raise UnsupportedError("Phi'(0+) is infinite for oscillating models")
        return 1.0 / self.psi_prime(self.phi(q))

    def levy_tail_mean(self) -> float:
        """integral of |z| over z <= -1 against the Levy measure."""
        if self.jump_rate == 0:
            return 0.0
        return self.jump_rate * self.jump_law.mean_above_one()


# -- JSON configuration ----------------------------------------------------

def _jump_law_from_dict(d: dict) -> JumpLaw:
    known = {"exp_mean", "point", "mixture"}
    unknown = set(d) - known
    if unknown:
        raise DomainError(f"unknown jump law keys: {sorted(unknown)}")
    if len(d) != 1:
        raise DomainError("jump law must have exactly one of exp_mean/point/mixture")
    if "exp_mean" in d:
        return JumpLaw("exp", exp_mean=float(d["exp_mean"]))
    if "point" in d:
        return JumpLaw("point", point=float(d["point"]))
    comps = tuple(
        (float(c["weight"]), _jump_law_from_dict(c["law"])) for c in d["mixture"]
    )
    return JumpLaw("mixture", components=comps)


def model_from_dict(d: dict) -> LevyModel:
    known = {"sigma2", "drift", "jumps"}
    unknown = set(d) - known
    if unknown:
        raise DomainError(f"unknown model keys: {sorted(unknown)}")
    rate, law = 0.0, None
    if "jumps" in d and d["jumps"] is not None:
        j = d["jumps"]
        unknown = set(j) - {"rate", "law"}
        if unknown:
            raise DomainError(f"unknown jump keys: {sorted(unknown)}")
        rate = float(j.get("rate", 0.0))
        if rate > 0:
            law = _jump_law_from_dict(j["law"])
    return LevyModel(
        sigma2=float(d.get("sigma2", 0.0)),
        drift=float(d.get("drift", 0.0)),
        jump_rate=rate,
        jump_law=law,
    )


def model_from_json(path) -> LevyModel:
    with open(path) as fh:
        return model_from_dict(json.load(fh))
