"""Validation of simulated stopping laws against analytic targets."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from ..embedding.boundary import law_of_local_time
from ..embedding.two_sided import expected_local_time

SURVIVAL_QUANTILES = np.arange(1, 10) / 10.0


def ks_distance(samples: np.ndarray, measure) -> float:
    """Kolmogorov-Smirnov distance between a sample and the target.

    Uses both one-sided gaps against the right-continuous CDF and its
    left limit, so atoms in the target are handled exactly.
    """
    x = np.sort(np.asarray(samples, dtype=float))
    n = len(x)
    if n == 0:
        return float("nan")
    pts = np.unique(x)
    atoms = getattr(measure, "atoms", None)
    if atoms:
        pts = np.unique(np.concatenate([pts, [a for a, _ in atoms]]))
    fn_hi = np.searchsorted(x, pts, side="right") / n
    fn_lo = np.searchsorted(x, pts, side="left") / n
    f = np.asarray(measure.cdf(pts), dtype=float)
    fl = np.asarray(measure.cdf_left(pts), dtype=float)
    return float(max(np.max(np.abs(fn_hi - f)), np.max(np.abs(fn_lo - fl))))


@dataclass
class Report:
    """Consolidated comparison of a simulation batch to its target."""

    n_paths: int
    n_censored: int
    censor_rate: float
    ks: float
    mean_x: float
    mean_target: float
    mean_se: float
    second_moment_x: float
    second_moment_target: float
    mean_l: float
    expected_l: float | None
    survival_quantiles: list = field(default_factory=list)
    survival_levels: list = field(default_factory=list)
    survival_analytic: list = field(default_factory=list)
    max_survival_dev: float | None = None
    n_ambiguous: float = 0.0
    big_z_rate: float = 0.0
    backend: str = ""

    def to_dict(self) -> dict:
        return asdict(self)


def validate(result, measure, scale=None, boundary=None,
             xlaw=None) -> Report:
    """Build a Report from a batch result and the target measure.

    Censored paths are excluded from the distributional statistics but
    counted in the censoring rate.  The local-time survival comparison
    is produced only when `boundary` and `xlaw` are both given.
    """
    keep = result.stopped
    xs = result.x[keep]
    ls = result.l[keep]
    n = len(result.x)
    n_kept = len(xs)

    ks = ks_distance(xs, measure) if n_kept else float("nan")
    mean_x = float(np.mean(xs)) if n_kept else float("nan")
    mean_se = float(np.std(xs) / np.sqrt(n_kept)) if n_kept else float("nan")
    m2_x = float(np.mean(xs ** 2)) if n_kept else float("nan")

    expected_l = None
    if scale is not None:
        expected_l = float(expected_local_time(measure, scale))

    levels, analytic, max_dev = [], [], None
    if boundary is not None and xlaw is not None and n_kept:
        levels = np.quantile(ls, SURVIVAL_QUANTILES)
        analytic = law_of_local_time(boundary, xlaw, levels)
        empirical = 1.0 - SURVIVAL_QUANTILES
        max_dev = float(np.max(np.abs(analytic - empirical)))

    return Report(
        n_paths=n,
        n_censored=int(n - n_kept),
        censor_rate=result.censor_rate,
        ks=ks,
        mean_x=mean_x,
        mean_target=float(measure.mean()),
        mean_se=mean_se,
        second_moment_x=m2_x,
        second_moment_target=float(measure.second_moment()),
        mean_l=float(np.mean(ls)) if n_kept else float("nan"),
        expected_l=expected_l,
        survival_quantiles=list(map(float, SURVIVAL_QUANTILES)),
        survival_levels=list(map(float, levels)),
        survival_analytic=list(map(float, analytic)),
        max_survival_dev=max_dev,
        n_ambiguous=result.n_ambiguous,
        big_z_rate=result.n_big_z / max(result.n_steps, 1.0),
        backend=result.meta.get("backend", ""),
    )
