"""Moment-matched distribution pairs built from Chebyshev nodes.

For even k >= 4, take the k roots of the degree-k Chebyshev polynomial
of the first kind (negated so they ascend) and attach the weights
y_i = 1 / T_k'(x_i). Splitting this signed measure into its positive
and negative parts and normalizing each yields two distributions on
[-1, 1] with disjoint supports whose first k - 2 moments agree exactly,
yet whose W1 distance exceeds 1/(2k). The pair witnesses how much
spectral information k - 2 moments can fail to pin down.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .wasserstein import PointMassDistribution

__all__ = [
    "SignedMeasure",
    "BoundCheck",
    "RootWeightBoundsReport",
    "chebyshev_signed_measure",
    "chebyshev_construction",
    "moments_of",
    "root_weight_bounds_check",
]


@dataclass(frozen=True)
class SignedMeasure:
    """Atoms at ``locations`` carrying signed ``weights``."""

    locations: np.ndarray
    weights: np.ndarray


@dataclass(frozen=True)
class BoundCheck:
    """One value against a closed interval, with signed margins."""

    index: int
    value: float
    lower: float
    upper: float

    @property
    def margin_lower(self) -> float:
        return self.value - self.lower

    @property
    def margin_upper(self) -> float:
        return self.upper - self.value

    @property
    def ok(self) -> bool:
        return self.margin_lower >= 0.0 and self.margin_upper >= 0.0


@dataclass(frozen=True)
class RootWeightBoundsReport:
    """Numerical margins for the analytic root and weight bounds.

    The stated constants are asymptotic in spirit; small k can violate
    them slightly, so callers get margins rather than an exception.
    """

    k: int
    weight_checks: tuple[BoundCheck, ...]
    gap_checks: tuple[BoundCheck, ...]
    normalization_check: BoundCheck
    balance_error: float

    @property
    def all_ok(self) -> bool:
        return (
            all(c.ok for c in self.weight_checks)
            and all(c.ok for c in self.gap_checks)
            and self.normalization_check.ok
            and self.balance_error <= 1e-12
        )


def _validate_order(k: int) -> None:
    if k < 4 or k % 2 != 0:
        raise ValueError(f"construction needs an even order k >= 4, got k={k}")


def chebyshev_signed_measure(k: int) -> SignedMeasure:
    """Chebyshev roots (ascending) with weights 1 / T_k'(root)."""
    _validate_order(k)
    i = np.arange(1, k + 1)
    theta = (2 * i - 1) * math.pi / (2 * k)
    roots = -np.cos(theta)
    # T_k'(cos t) = k * U_{k-1}(cos t) and U_{k-1}(cos t) = sin(kt)/sin(t);
    # evaluate at t = pi - theta so the roots ascend.
    t = math.pi - theta
    u = np.sin(k * t) / np.sin(t)
    return SignedMeasure(locations=roots, weights=1.0 / (k * u))


def chebyshev_construction(k: int) -> tuple[PointMassDistribution, PointMassDistribution]:
    """The normalized positive and negative parts of the signed measure.

    Returns (p, q), each with k/2 atoms inside [-1, 1], disjoint
    supports, and first k - 2 moments equal.
    """
    measure = chebyshev_signed_measure(k)
    pos = measure.weights > 0
    p = PointMassDistribution(
        measure.locations[pos], measure.weights[pos] / measure.weights[pos].sum()
    )
    q = PointMassDistribution(
        measure.locations[~pos], measure.weights[~pos] / measure.weights[~pos].sum()
    )
    return p, q


def moments_of(dist: PointMassDistribution, k: int) -> np.ndarray:
    """First k raw moments of a point-mass distribution."""
    if k < 1:
        raise ValueError(f"need k >= 1, got {k}")
    powers = np.vander(dist.locations, k + 1, increasing=True)[:, 1:]
    return powers.T @ dist.masses


def root_weight_bounds_check(k: int) -> RootWeightBoundsReport:
    """Check the analytic envelopes on weights, root gaps and total mass.

    For i up to k/2: |y_i| should lie in [i/k^2, i*pi/k^2] and the gap
    x_{i+1} - x_i in [5i/k^2, 10i/k^2]; the positive weights should sum
    into [1/4, 1/2] and cancel the negative ones exactly.
    """
    measure = chebyshev_signed_measure(k)
    half = k // 2
    ksq = k * k
    weight_checks = tuple(
        BoundCheck(i, abs(float(measure.weights[i - 1])), i / ksq, i * math.pi / ksq)
        for i in range(1, half + 1)
    )
    gap_checks = tuple(
        BoundCheck(
            i,
            float(measure.locations[i] - measure.locations[i - 1]),
            5 * i / ksq,
            10 * i / ksq,
        )
        for i in range(1, half + 1)
    )
    pos_sum = float(measure.weights[measure.weights > 0].sum())
    neg_sum = float(measure.weights[measure.weights < 0].sum())
    return RootWeightBoundsReport(
        k=k,
        weight_checks=weight_checks,
        gap_checks=gap_checks,
        normalization_check=BoundCheck(0, pos_sum, 0.25, 0.5),
        balance_error=abs(pos_sum + neg_sum),
    )
