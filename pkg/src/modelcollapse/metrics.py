"""Distances between a generation's samples and the original data."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .distributions import SampleSet
from .estimators import GaussianModel

KL_FLOOR = 1e-10
DEFAULT_BINS = 100


@dataclass(frozen=True)
class Histogram:
    edges: np.ndarray
    densities: np.ndarray

    def __post_init__(self):
        if len(self.edges) != len(self.densities) + 1:
            raise ValueError("need len(edges) == len(densities) + 1")
        if np.any(np.diff(self.edges) <= 0):
            raise ValueError("edges must be strictly increasing")

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.edges)

    @property
    def masses(self) -> np.ndarray:
        return self.densities * self.widths


def histogram_density(samples: SampleSet, bins: int, range: tuple[float, float]) -> Histogram:
    """Equal-width density histogram on ``range``; out-of-range samples are
    clamped into the first/last bin."""
    lo, hi = map(float, range)
    if not lo < hi:
        raise ValueError(f"histogram range needs lo < hi, got [{lo}, {hi}]")
    if bins < 1:
        raise ValueError(f"bins must be >= 1, got {bins}")
    edges = np.linspace(lo, hi, bins + 1)
    counts = _bin_counts(samples.values, edges)
    return Histogram(edges, counts / (samples.values.size * np.diff(edges)))


def _bin_counts(x, edges):
    bins = edges.size - 1
    lo, hi = edges[0], edges[-1]
    idx = np.floor((x - lo) / (hi - lo) * bins)
    idx = np.clip(idx, 0, bins - 1).astype(np.intp)
    # same edge repair as np.histogram so binning agrees at boundaries
    idx[(x < edges[idx]) & (idx > 0)] -= 1
    idx[(x >= edges[idx + 1]) & (idx < bins - 1)] += 1
    return np.bincount(idx, minlength=bins)


def shared_range(*sets: SampleSet) -> tuple[float, float]:
    lo = min(float(s.values.min()) for s in sets)
    hi = max(float(s.values.max()) for s in sets)
    if lo == hi:
        lo, hi = lo - 0.5, hi + 0.5
    return lo, hi


def kl_divergence(p: SampleSet, q: SampleSet, bins: int = DEFAULT_BINS) -> float:
    """KL(p || q) between histograms built on the common range of p and q.

    Empty bins get density 1e-10 before the masses are renormalised.
    """
    lo, hi = shared_range(p, q)
    edges = np.linspace(lo, hi, bins + 1)
    w = np.diff(edges)
    if np.any(w <= 0):
        raise ValueError(f"range [{lo}, {hi}] too narrow for {bins} bins")
    # density * width == count / n; the floor applies to the density
    cp = _bin_counts(p.values, edges)
    cq = _bin_counts(q.values, edges)
    mp = np.where(cp == 0, KL_FLOOR * w, cp / p.values.size)
    mq = np.where(cq == 0, KL_FLOOR * w, cq / q.values.size)
    mp /= mp.sum()
    mq /= mq.sum()
    return max(float(np.sum(mp * np.log(mp / mq))), 0.0)


def wasserstein1(p: SampleSet, q: SampleSet) -> float:
    """Exact W1 as the L1 distance between the two empirical quantile functions.

    Breakpoints i/n and j/m are held as integers over the common denominator
    n*m so the merge is exact.
    """
    a = np.sort(p.values)
    b = np.sort(q.values)
    n, m = a.size, b.size
    t = np.union1d(np.arange(1, n + 1, dtype=np.int64) * m,
                   np.arange(1, m + 1, dtype=np.int64) * n)
    du = np.diff(t, prepend=0) / (n * m)
    # on (t_{k-1}, t_k] the quantile index is ceil(t_k / m) for a, ceil(t_k / n) for b
    ia = -(-t // m) - 1
    ib = -(-t // n) - 1
    return float(np.sum(du * np.abs(a[ia] - b[ib])))


def gaussian_w2_squared(a: GaussianModel, b: GaussianModel) -> float:
    return (a.mean - b.mean) ** 2 + (a.std - b.std) ** 2
