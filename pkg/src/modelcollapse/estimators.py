"""Generative models refit at every generation: a Gaussian-kernel KDE and a
moment-matched normal."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .distributions import SampleSet

_LOG_SQRT_2PI = 0.5 * math.log(2 * math.pi)
# caps the (len(x), n_points) work matrix at ~32 MB
_CHUNK = 4_000_000


@dataclass(frozen=True)
class KdeModel:
    support_points: np.ndarray
    bandwidth: float

    def __post_init__(self):
        if not self.bandwidth > 0:
            raise ValueError(f"bandwidth must be > 0, got {self.bandwidth}")
        if np.asarray(self.support_points).size == 0:
            raise ValueError("KDE needs at least one support point")


@dataclass(frozen=True)
class GaussianModel:
    mean: float
    variance: float

    def __post_init__(self):
        if not self.variance >= 0:
            raise ValueError(f"variance must be >= 0, got {self.variance}")

    @property
    def std(self) -> float:
        return math.sqrt(self.variance)


def fit_kde(samples: SampleSet, bandwidth: float) -> KdeModel:
    return KdeModel(samples.values, float(bandwidth))


def kde_log_density(m: KdeModel, x):
    """Log of the mean of Gaussian kernels centred on the support points.

    Accepts a scalar or an array; evaluates in chunks with log-sum-exp so the
    far tails stay finite.
    """
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    pts = m.support_points
    h = m.bandwidth
    norm = math.log(pts.size) + math.log(h) + _LOG_SQRT_2PI
    out = np.empty(xs.size)
    step = max(1, _CHUNK // pts.size)
    for i in range(0, xs.size, step):
        z = (xs[i:i + step, None] - pts[None, :]) / h
        out[i:i + step] = logsumexp(-0.5 * z * z, axis=1) - norm
    return out.reshape(np.shape(x)) if np.ndim(x) else float(out[0])


def kde_sample(m: KdeModel, n: int, rng: np.random.Generator, generation: int = 0) -> SampleSet:
    """Pick support points uniformly with replacement, add N(0, h^2) noise."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    idx = rng.integers(0, m.support_points.size, size=n)
    noise = rng.standard_normal(n)
    return SampleSet(m.support_points[idx] + m.bandwidth * noise, generation)


def fit_gaussian(samples: SampleSet) -> GaussianModel:
    v = samples.values
    if v.size < 2:
        raise ValueError("fit_gaussian needs at least 2 samples")
    return GaussianModel(float(v.mean()), float(v.var(ddof=1)))


def gaussian_sample(m: GaussianModel, n: int, rng: np.random.Generator,
                    generation: int = 0) -> SampleSet:
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return SampleSet(m.mean + m.std * rng.standard_normal(n), generation)
