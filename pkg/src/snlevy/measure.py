"""Target probability measures on the real line.

A target measure is a finite mixture of point masses and absolutely
continuous pieces. It provides the distribution function, the upper
tail, the right-continuous quantile function, support bounds, moments,
and quadrature against arbitrary integrands, all of which the boundary
constructions consume.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError

# unbounded densities are truncated where the remaining tail mass
# drops below this level
TAIL_TRUNCATION = 1e-8

_DENSITY_KEYS = {
    "uniform": {"kind", "a", "b"},
    "exp": {"kind", "rate"},
    "table": {"kind", "xs", "fs"},
}


@dataclass(frozen=True)
class DensityPiece:
    """One absolutely continuous component, tabulated on a grid.

    Parameters
    ----------
    xs, fs : ndarray
        Grid abscissae (strictly increasing) and density values. The
        tabulated density integrates to `weight` over [xs[0], xs[-1]].
    weight : float
        Total mass carried by this piece.
    """

    xs: np.ndarray
    fs: np.ndarray
    weight: float

    def __post_init__(self):
        if len(self.xs) < 2 or np.any(np.diff(self.xs) <= 0):
            raise DomainError("density grid must be strictly increasing")
        if np.any(self.fs < 0):
            raise DomainError("density values must be nonnegative")


def _piece_from_dict(d: dict) -> DensityPiece:
    kind = d.get("kind")
    if kind not in _DENSITY_KEYS:
        raise DomainError(f"unknown density kind: {kind!r}")
    extra = set(d) - _DENSITY_KEYS[kind]
    if extra:
        raise DomainError(f"unknown density keys: {sorted(extra)}")
    if kind == "uniform":
        a, b = float(d["a"]), float(d["b"])
        if not a < b:
            raise DomainError("uniform density needs a < b")
        xs = np.linspace(a, b, 2049)
        fs = np.full_like(xs, 1.0 / (b - a))
        return DensityPiece(xs, fs, 1.0)
    if kind == "exp":
        rate = float(d["rate"])
        if rate <= 0:
            raise DomainError("exponential rate must be positive")
        # truncate where the tail mass falls below TAIL_TRUNCATION
        x_hi = -math.log(TAIL_TRUNCATION) / rate
        xs = np.linspace(0.0, x_hi, 8193)
        fs = rate * np.exp(-rate * xs)
        return DensityPiece(xs, fs, 1.0 - TAIL_TRUNCATION)
    xs = np.asarray(d["xs"], dtype=float)
    fs = np.asarray(d["fs"], dtype=float)
    w = float(np.trapz(fs, xs))
    return DensityPiece(xs, fs, w)


class TargetMeasure:
    """Probability measure given by atoms plus density pieces.

    Atoms may not sit at zero. If density pieces are supplied from a
    normalized family (uniform, exp) alongside atoms, their weight is
    scaled so the total mass is one.

    Parameters
    ----------
    atoms : sequence of (location, mass)
    pieces : sequence of DensityPiece
    """

    def __init__(self, atoms: Sequence[tuple] = (),
                 pieces: Sequence[DensityPiece] = ()):
        atoms = [(float(x), float(m)) for x, m in atoms]
        for x, m in atoms:
            if x == 0.0:
                raise DomainError("atom at zero is not supported")
            if m <= 0:
                raise DomainError("atom masses must be positive")
        atoms.sort()
        atom_mass = sum(m for _, m in atoms)
        if atom_mass > 1 + 1e-12:
            raise DomainError("atom masses exceed one")
        piece_mass = sum(p.weight for p in pieces)
        if pieces and atom_mass > 0:
            scale = (1.0 - atom_mass) / piece_mass
            pieces = [DensityPiece(p.xs, p.fs * scale, p.weight * scale)
                      for p in pieces]
            piece_mass = 1.0 - atom_mass
        total = atom_mass + piece_mass
        if abs(total - 1.0) > 1e-6:
            raise DomainError(f"total mass {total} differs from one")
        # small renormalization absorbs tail truncation of exp pieces
        self._renorm = 1.0 / total
        self.atoms = [(x, m * self._renorm) for x, m in atoms]
        self.pieces = [DensityPiece(p.xs, p.fs * self._renorm,
                                    p.weight * self._renorm)
                       for p in pieces]
        self._build_cdf()

    def _build_cdf(self):
        pts = [x for x, _ in self.atoms]
        for p in self.pieces:
            pts.extend(p.xs.tolist())
        xs = np.unique(np.asarray(pts, dtype=float))
        dens = np.zeros_like(xs)
        for p in self.pieces:
            inside = (xs >= p.xs[0]) & (xs <= p.xs[-1])
            dens[inside] += np.interp(xs[inside], p.xs, p.fs)
        # accumulate per piece so gaps between pieces carry no mass
        cont = np.zeros_like(xs)
        for p in self.pieces:
            cum = np.zeros_like(p.xs)
            cum[1:] = np.cumsum(0.5 * (p.fs[1:] + p.fs[:-1])
                                * np.diff(p.xs))
            cont += np.interp(xs, p.xs, cum, left=0.0, right=cum[-1])
        # breakpoint representation: atoms become vertical segments
        # (duplicated abscissa), density parts stay piecewise linear
        bx, bf = [], []
        atom_mass_so_far = 0.0
        locs = [x for x, _ in self.atoms]
        for i, x in enumerate(xs):
            if locs and x in locs:
                m = dict(self.atoms)[x]
                bx.append(x)
                bf.append(cont[i] + atom_mass_so_far)
                atom_mass_so_far += m
            bx.append(x)
            bf.append(cont[i] + atom_mass_so_far)
        self._xs = xs
        self._density_grid = dens
        self._bx = np.asarray(bx)
        self._bf = np.asarray(bf)
        self._atom_locs = np.asarray(locs)
        self._atom_masses = np.asarray([m for _, m in self.atoms])

    def _interp_cdf(self, x: np.ndarray, side: str) -> np.ndarray:
        """Evaluate the cdf (side='right') or its left limit ('left')."""
        bx, bf = self._bx, self._bf
        i1 = np.searchsorted(bx, x, side)
        i0 = np.clip(i1 - 1, 0, len(bx) - 1)
        i1 = np.clip(i1, 0, len(bx) - 1)
        dx = bx[i1] - bx[i0]
        with np.errstate(invalid="ignore", divide="ignore"):
            t = np.where(dx > 0, (x - bx[i0]) / np.where(dx > 0, dx, 1.0),
                         0.0)
        out = bf[i0] + np.clip(t, 0.0, 1.0) * (bf[i1] - bf[i0])
        out = np.where(x < bx[0], 0.0, out)
        if side == "left":
            out = np.where(x > bx[-1], bf[-1], out)
            out = np.where(x == bx[0], 0.0, out)
        else:
            out = np.where(x >= bx[-1], bf[-1], out)
        return out

    # -- support and basic functionals ---------------------------------

    @property
    def a_mu(self) -> float:
        """Infimum of the support."""
        return float(self._xs[0])

    @property
    def b_mu(self) -> float:
        """Supremum of the support."""
        return float(self._xs[-1])

    @property
    def a_star(self) -> float:
        """Mass on (-inf, 0], i.e. F(0)."""
        return self.cdf(0.0)

    @property
    def has_atoms(self) -> bool:
        return len(self.atoms) > 0

    @property
    def is_density_only(self) -> bool:
        return not self.atoms and len(self.pieces) > 0

    def cdf(self, x) -> float | np.ndarray:
        """Right-continuous distribution function F(x)."""
        x = np.asarray(x, dtype=float)
        out = self._interp_cdf(x, "right")
        if out.ndim == 0:
            return float(out)
        return out

    def cdf_left(self, x) -> float | np.ndarray:
        """Left limit F(x-)."""
        x = np.asarray(x, dtype=float)
        out = self._interp_cdf(x, "left")
        if out.ndim == 0:
            return float(out)
        return out

    def tail(self, s) -> float | np.ndarray:
        """Upper tail mass of [s, inf) = 1 - F(s-)."""
        s = np.asarray(s, dtype=float)
        out = 1.0 - self._interp_cdf(s, "left")
        if out.ndim == 0:
            return float(out)
        return out

    def quantile(self, u) -> float | np.ndarray:
        """Right-continuous quantile F^{-1}(u) = inf{x : F(x) > u}."""
        u = np.asarray(u, dtype=float)
        bx, bf = self._bx, self._bf
        i1 = np.searchsorted(bf, u, side="right")
        i0 = np.clip(i1 - 1, 0, len(bf) - 1)
        i1 = np.clip(i1, 0, len(bf) - 1)
        df = bf[i1] - bf[i0]
        with np.errstate(invalid="ignore", divide="ignore"):
            t = np.where(df > 0, (u - bf[i0]) / np.where(df > 0, df, 1.0),
                         0.0)
        out = bx[i0] + np.clip(t, 0.0, 1.0) * (bx[i1] - bx[i0])
        out = np.where(u >= bf[-1], bx[-1], out)
        out = np.where(u < bf[0], bx[0], out)
        if out.ndim == 0:
            return float(out)
        return out

    def quantile_left(self, u) -> float | np.ndarray:
        """Left-continuous quantile inf{x : F(x) >= u}."""
        u = np.asarray(u, dtype=float)
        bx, bf = self._bx, self._bf
        i1 = np.searchsorted(bf, u, side="left")
        i0 = np.clip(i1 - 1, 0, len(bf) - 1)
        i1 = np.clip(i1, 0, len(bf) - 1)
        df = bf[i1] - bf[i0]
        with np.errstate(invalid="ignore", divide="ignore"):
            t = np.where(df > 0, (u - bf[i0]) / np.where(df > 0, df, 1.0),
                         0.0)
        out = bx[i0] + np.clip(t, 0.0, 1.0) * (bx[i1] - bx[i0])
        out = np.where(u > bf[-1], bx[-1], out)
        out = np.where(u <= bf[0], bx[0], out)
        if out.ndim == 0:
            return float(out)
        return out

    def density(self, x) -> float | np.ndarray:
        """Density value; only meaningful for atom-free measures."""
        x = np.asarray(x, dtype=float)
        out = np.interp(x, self._xs, self._density_grid,
                        left=0.0, right=0.0)
        if out.ndim == 0:
            return float(out)
        return out

    # -- quadrature -----------------------------------------------------

    def integrate(self, fn: Callable[[np.ndarray], np.ndarray],
                  lo: float = -np.inf, hi: float = np.inf) -> float:
        """Integral of fn against the measure over (lo, hi]."""
        total = 0.0
        for x, m in self.atoms:
            if lo < x <= hi:
                total += m * float(fn(np.asarray(x)))
        for p in self.pieces:
            a = max(p.xs[0], lo)
            b = min(p.xs[-1], hi)
            if a >= b:
                continue
            xs = p.xs[(p.xs > a) & (p.xs < b)]
            xs = np.concatenate(([a], xs, [b]))
            fs = np.interp(xs, p.xs, p.fs)
            total += float(np.trapz(fn(xs) * fs, xs))
        return total

    def mean(self) -> float:
        return self.integrate(lambda x: x)

    def second_moment(self) -> float:
        return self.integrate(lambda x: x * x)


def measure_from_dict(d: dict) -> TargetMeasure:
    """Build a measure from its dict form.

    Accepted keys: "atoms" (list of [x, mass] pairs) and "density"
    (a single density spec or a list of them). Unknown keys are
    rejected.
    """
    extra = set(d) - {"atoms", "density"}
    if extra:
        raise DomainError(f"unknown measure keys: {sorted(extra)}")
    atoms = [tuple(a) for a in d.get("atoms", [])]
    dens = d.get("density")
    if dens is None:
        pieces = []
    elif isinstance(dens, list):
        pieces = [_piece_from_dict(p) for p in dens]
    else:
        pieces = [_piece_from_dict(dens)]
    return TargetMeasure(atoms=atoms, pieces=pieces)


def measure_from_json(path: str) -> TargetMeasure:
    with open(path) as fh:
        return measure_from_dict(json.load(fh))
