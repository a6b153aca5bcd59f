"""Leading-order predictions for the Gaussian moment-matching chain.

With ``sizes = (M_0, M_1, ...)`` and source variance ``sigma2``:

* marginal variance of generation-n samples: sigma2 * (1 + sum_{i<n} 1/M_i)
* E[W2^2] between the source normal and the fit to generation n:
  1.5 * sigma2 * sum_{i<=n} 1/M_i
* Var[W2^2]: 0.5 * sigma2^2 * (sum 3/M_i^2 + sum_{i != j} 4/(M_i M_j)),
  the second sum over ordered pairs.

Higher-order remainders are not modelled. Note the callers pass a different
slice of the schedule to each function (M_0..M_{n-1} for the variance,
M_0..M_n for the distance terms).
"""
from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class SampleSchedule:
    sizes: tuple
    base_variance: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "sizes", tuple(int(m) for m in self.sizes))
        if any(m < 2 for m in self.sizes):
            raise ValueError("every sample size must be >= 2")
        if not self.base_variance > 0:
            raise ValueError("base_variance must be > 0")

    @classmethod
    def constant(cls, m: int, n: int, base_variance: float = 1.0) -> "SampleSchedule":
        return cls((m,) * n, base_variance)


@dataclass(frozen=True)
class TheoryPrediction:
    variance_ratio: float
    expected_w2sq: float
    variance_of_w2sq: float


def _inv_sum(sizes, power=1):
    return math.fsum(1.0 / m**power for m in sizes)


def predicted_variance(schedule: SampleSchedule) -> float:
    return schedule.base_variance * (1.0 + _inv_sum(schedule.sizes))


def expected_w2_squared(schedule: SampleSchedule) -> float:
    return 1.5 * schedule.base_variance * _inv_sum(schedule.sizes)


def variance_of_w2_squared(schedule: SampleSchedule) -> float:
    s1 = _inv_sum(schedule.sizes)
    s2 = _inv_sum(schedule.sizes, 2)
    # ordered off-diagonal pairs: (sum 1/M)^2 - sum 1/M^2
    cross = s1 * s1 - s2
    return 0.5 * schedule.base_variance**2 * (3.0 * s2 + 4.0 * cross)


def predict(schedule: SampleSchedule) -> TheoryPrediction:
    """All three predictions from one schedule (sizes read as M_0..M_n)."""
    return TheoryPrediction(
        variance_ratio=predicted_variance(schedule) / schedule.base_variance,
        expected_w2sq=expected_w2_squared(schedule),
        variance_of_w2sq=variance_of_w2_squared(schedule),
    )
