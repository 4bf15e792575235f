"""Wasserstein-1 distance and quantile quantization for discrete distributions.

All distributions here are finite collections of point masses on the
real line. W1 between two of them is the integral of the absolute CDF
difference, computed exactly by a sweep over the merged breakpoints.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "PointMassDistribution",
    "from_sorted_vector",
    "w1",
    "l1_sorted",
    "quantize",
]

_MASS_TOL = 1e-9


@dataclass(frozen=True)
class PointMassDistribution:
    """Point masses at ``locations`` with positive ``masses`` summing to 1."""

    locations: np.ndarray
    masses: np.ndarray

    def __post_init__(self) -> None:
        locs = np.asarray(self.locations, dtype=float)
        mass = np.asarray(self.masses, dtype=float)
        object.__setattr__(self, "locations", locs)
        object.__setattr__(self, "masses", mass)
        if locs.ndim != 1 or mass.ndim != 1 or locs.size != mass.size:
            raise ValueError("locations and masses must be 1-d arrays of equal length")
        if locs.size < 1:
            raise ValueError("distribution needs at least one atom")
        if not np.isfinite(locs).all() or not np.isfinite(mass).all():
            raise ValueError("locations and masses must be finite")
        if (mass <= 0).any():
            raise ValueError("masses must be strictly positive")
        total = mass.sum()
        if abs(total - 1.0) > _MASS_TOL:
            raise ValueError(f"masses must sum to 1 within {_MASS_TOL}, got {total!r}")

    def sorted_merged(self) -> tuple[np.ndarray, np.ndarray]:
        """Atoms sorted by location with coincident locations merged."""
        order = np.argsort(self.locations, kind="stable")
        locs = self.locations[order]
        mass = self.masses[order]
        keep = np.empty(locs.size, dtype=bool)
        keep[0] = True
        keep[1:] = locs[1:] != locs[:-1]
        idx = np.cumsum(keep) - 1
        merged = np.zeros(keep.sum())
        np.add.at(merged, idx, mass)
        return locs[keep], merged


def from_sorted_vector(values) -> PointMassDistribution:
    """Distribution placing equal mass 1/d on each of d given values."""
    vals = np.asarray(values, dtype=float)
    if vals.ndim != 1 or vals.size < 1:
        raise ValueError("need a non-empty 1-d vector")
    return PointMassDistribution(vals, np.full(vals.size, 1.0 / vals.size))


def w1(p: PointMassDistribution, q: PointMassDistribution) -> float:
    """Wasserstein-1 distance between two point-mass distributions."""
    locs = np.concatenate([p.locations, q.locations])
    deltas = np.concatenate([p.masses, -q.masses])
    order = np.argsort(locs, kind="stable")
    locs = locs[order]
    cdf_gap = np.cumsum(deltas[order])
    # integral of |F_p - F_q| over each inter-breakpoint interval
    return float(np.sum(np.abs(cdf_gap[:-1]) * np.diff(locs)))


def l1_sorted(a, b) -> float:
    """Entrywise L1 distance between two ascending vectors of equal length.

    For sorted vectors of the same length this equals d times the W1
    distance between their equal-mass point-mass distributions.
    """
    av = np.asarray(a, dtype=float)
    bv = np.asarray(b, dtype=float)
    if av.ndim != 1 or bv.ndim != 1:
        raise ValueError("inputs must be 1-d vectors")
    if av.size != bv.size:
        raise ValueError(f"length mismatch: {av.size} vs {bv.size}")
    if (np.diff(av) < 0).any() or (np.diff(bv) < 0).any():
        raise ValueError("inputs must be ascending")
    return float(np.abs(av - bv).sum())


def quantize(p: PointMassDistribution, d: int) -> PointMassDistribution:
    """Round ``p`` to d equal masses at its i/(d+1) quantiles, i = 1..d.

    The result's W1 distance from ``p`` is at most (range of support)/d.
    """
    if d < 1:
        raise ValueError(f"need at least one output mass, got d={d}")
    locs, mass = p.sorted_merged()
    cdf = np.cumsum(mass)
    levels = np.arange(1, d + 1) / (d + 1)
    idx = np.minimum(np.searchsorted(cdf, levels, side="left"), locs.size - 1)
    return PointMassDistribution(locs[idx], np.full(d, 1.0 / d))
