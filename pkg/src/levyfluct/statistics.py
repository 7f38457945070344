"""Empirical distribution helpers for the verification harness."""
from __future__ import annotations

import numpy as np


class EmpiricalCdf:
    """Right-continuous step CDF of a sample."""

    def __init__(self, samples):
        samples = np.asarray(samples, dtype=float)
        if samples.size == 0:
            raise ValueError("empirical CDF requires at least one sample")
        self.sorted = np.sort(samples)
        self.n = samples.size

    def __call__(self, x):
        out = np.searchsorted(self.sorted, x, side="right") / self.n
        return float(out) if np.isscalar(x) else out


def ks_statistic(cdf, samples):
    """One-sample Kolmogorov-Smirnov statistic against an analytic CDF.

    sup_x |F_n(x) - F(x)|, evaluated at the sample points from both sides of
    each empirical jump.
    """
    s = np.sort(np.asarray(samples, dtype=float))
    if s.size == 0:
        raise ValueError("ks_statistic requires at least one sample")
    f = np.asarray(cdf(s), dtype=float)
    n = s.size
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - f), np.max(f - (i - 1) / n)))


def ks_two_sample(a, b):
    """Two-sample Kolmogorov-Smirnov statistic sup_x |F_a(x) - F_b(x)|."""
    a = np.sort(np.asarray(a, dtype=float))
    b = np.sort(np.asarray(b, dtype=float))
    if a.size == 0 or b.size == 0:
        raise ValueError("ks_two_sample requires nonempty samples")
    grid = np.concatenate([a, b])
    fa = np.searchsorted(a, grid, side="right") / a.size
    fb = np.searchsorted(b, grid, side="right") / b.size
    return float(np.max(np.abs(fa - fb)))
