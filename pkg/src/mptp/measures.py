"""Empirical measures: weighted sample clouds with Wasserstein-2 geometry.

Only the exact 1-D quantile coupling and a factorial brute-force oracle are
provided; desk-scale verification does not need a general optimal-transport
solver.
"""

import itertools
from dataclasses import dataclass, field

import numpy as np

_WEIGHT_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class EmpiricalMeasure:
    """A weighted cloud of n samples in R^d representing a probability law."""

    samples: np.ndarray
    weights: np.ndarray = field(default=None)

    def __post_init__(self):
        samples = np.atleast_2d(np.asarray(self.samples, dtype=float))
        if samples.shape[0] < 1:
            raise ValueError("empirical measure needs at least one sample")
        if not np.isfinite(samples).all():
            raise ValueError("empirical measure samples must be finite")
        if self.weights is None:
            weights = np.full(samples.shape[0], 1.0 / samples.shape[0])
        else:
            weights = np.asarray(self.weights, dtype=float)
            if weights.shape != (samples.shape[0],):
                raise ValueError("weights must be a vector matching the sample count")
            if (weights < 0).any():
                raise ValueError("weights must be nonnegative")
            if abs(weights.sum() - 1.0) > _WEIGHT_TOL:
                raise ValueError(f"weights must sum to 1 (got {weights.sum()!r})")
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "weights", weights)

    @property
    def n(self):
        return self.samples.shape[0]

    @property
    def d(self):
        return self.samples.shape[1]

    @classmethod
    def dirac(cls, point):
        """Single-atom measure at ``point``."""
        return cls(np.atleast_2d(np.asarray(point, dtype=float)))

    def mean(self):
        return self.weights @ self.samples


def measure_mean(mu: EmpiricalMeasure):
    """Weighted sample mean of the measure."""
    return mu.mean()


def wasserstein2_1d(mu: EmpiricalMeasure, nu: EmpiricalMeasure) -> float:
    """Exact Wasserstein-2 distance between two 1-D empirical measures.

    Uses the quantile coupling: W2^2 = int_0^1 |F^-1(q) - G^-1(q)|^2 dq,
    evaluated exactly by merging the cumulative-weight breakpoints of both
    atom lists.  Equal-weight clouds with equal counts reduce to matching
    sorted samples.
    """
    if mu.d != 1 or nu.d != 1:
        raise ValueError(f"wasserstein2_1d supports d=1 only (got d={mu.d} and d={nu.d})")
    x = mu.samples[:, 0]
    y = nu.samples[:, 0]
    if (
        mu.n == nu.n
        and np.allclose(mu.weights, 1.0 / mu.n, atol=_WEIGHT_TOL)
        and np.allclose(nu.weights, 1.0 / nu.n, atol=_WEIGHT_TOL)
    ):
        diff = np.sort(x) - np.sort(y)
        return float(np.sqrt(np.mean(diff**2)))

    ix = np.argsort(x)
    iy = np.argsort(y)
    xs, wx = x[ix], mu.weights[ix]
    ys, wy = y[iy], nu.weights[iy]
    cx = np.cumsum(wx)
    cy = np.cumsum(wy)
    # merged quantile breakpoints; both quantile functions are piecewise
    # constant between consecutive levels, so the integral is a finite sum.
    levels = np.union1d(cx, cy)
    levels = levels[levels <= 1.0 + _WEIGHT_TOL]
    prev = 0.0
    total = 0.0
    for q in levels:
        seg = q - prev
        if seg <= 0:
            continue
        qm = 0.5 * (prev + q)
        xi = xs[np.searchsorted(cx, qm, side="right").clip(0, len(xs) - 1)]
        yi = ys[np.searchsorted(cy, qm, side="right").clip(0, len(ys) - 1)]
        total += seg * (xi - yi) ** 2
        prev = q
    return float(np.sqrt(total))


def wasserstein2_bruteforce(mu: EmpiricalMeasure, nu: EmpiricalMeasure) -> float:
    """Exhaustive-permutation Wasserstein-2 for tiny equal-weight clouds.

    Test oracle for :func:`wasserstein2_1d`; works in any dimension but
    refuses n > 8 (factorial blowup).
    """
    if mu.n != nu.n:
        raise ValueError("brute-force W2 needs equal sample counts")
    if mu.n > 8:
        raise ValueError(f"brute-force W2 refuses n={mu.n} > 8")
    if not (
        np.allclose(mu.weights, 1.0 / mu.n, atol=_WEIGHT_TOL)
        and np.allclose(nu.weights, 1.0 / nu.n, atol=_WEIGHT_TOL)
    ):
        raise ValueError("brute-force W2 needs equal weights")
    best = np.inf
    for perm in itertools.permutations(range(nu.n)):
        cost = np.mean(np.sum((mu.samples - nu.samples[list(perm)]) ** 2, axis=1))
        best = min(best, cost)
    return float(np.sqrt(best))
