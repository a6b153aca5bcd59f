"""Ground-truth source distributions: finite mixtures of Normal, Uniform and
Gamma components, each contributing a fixed number of samples.

Random streams are ``numpy.random.Generator`` objects backed by PCG64
(``make_rng``). Gamma variates come from numpy's Marsaglia-Tsang sampler.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np
from scipy import special


def make_rng(seed: int) -> np.random.Generator:
    """PCG64 stream; the only generator used anywhere in the package."""
    return np.random.Generator(np.random.PCG64(seed))


@dataclass(frozen=True)
class Normal:
    mean: float
    std: float
    count: int

    def __post_init__(self):
        if not self.std > 0:
            raise ValueError(f"Normal std must be > 0, got {self.std}")
        _check_count(self.count)

    def pdf(self, x):
        z = (np.asarray(x, dtype=float) - self.mean) / self.std
        return np.exp(-0.5 * z * z) / (self.std * math.sqrt(2 * math.pi))

    def cdf(self, x):
        return special.ndtr((np.asarray(x, dtype=float) - self.mean) / self.std)

    def draw(self, rng, size):
        return rng.normal(self.mean, self.std, size)

    @property
    def moments(self):
        return self.mean, self.std**2


@dataclass(frozen=True)
class Uniform:
    low: float
    high: float
    count: int

    def __post_init__(self):
        if not self.high > self.low:
            raise ValueError(f"Uniform needs high > low, got [{self.low}, {self.high}]")
        _check_count(self.count)

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        inside = (x >= self.low) & (x <= self.high)
        return np.where(inside, 1.0 / (self.high - self.low), 0.0)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        return np.clip((x - self.low) / (self.high - self.low), 0.0, 1.0)

    def draw(self, rng, size):
        return rng.uniform(self.low, self.high, size)

    @property
    def moments(self):
        return 0.5 * (self.low + self.high), (self.high - self.low) ** 2 / 12.0


@dataclass(frozen=True)
class Gamma:
    shape: float
    scale: float
    count: int

    def __post_init__(self):
        if not (self.shape > 0 and self.scale > 0):
            raise ValueError(f"Gamma needs shape, scale > 0, got {self.shape}, {self.scale}")
        _check_count(self.count)

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        pos = x > 0
        xs = np.where(pos, x, 1.0)
        logp = ((self.shape - 1) * np.log(xs) - xs / self.scale
                - math.lgamma(self.shape) - self.shape * math.log(self.scale))
        return np.where(pos, np.exp(logp), 0.0)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        return special.gammainc(self.shape, np.maximum(x, 0.0) / self.scale)

    def draw(self, rng, size):
        return rng.gamma(self.shape, self.scale, size)

    @property
    def moments(self):
        return self.shape * self.scale, self.shape * self.scale**2


Component = Union[Normal, Uniform, Gamma]
_KINDS = {"normal": Normal, "uniform": Uniform, "gamma": Gamma}


def _check_count(count):
    if int(count) != count or count < 1:
        raise ValueError(f"component count must be a positive integer, got {count}")


@dataclass(frozen=True)
class MixtureSpec:
    components: tuple
    name: str = field(default="custom", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        if not self.components:
            raise ValueError("MixtureSpec needs at least one component")

    @property
    def total(self) -> int:
        return sum(c.count for c in self.components)

    @property
    def weights(self) -> np.ndarray:
        return np.array([c.count for c in self.components], dtype=float) / self.total

    def mean(self) -> float:
        return float(sum(w * c.moments[0] for w, c in zip(self.weights, self.components)))

    def variance(self) -> float:
        """Exact variance of the count-weighted mixture."""
        mu = self.mean()
        return float(sum(w * (c.moments[1] + (c.moments[0] - mu) ** 2)
                         for w, c in zip(self.weights, self.components)))

    def to_dict(self) -> dict:
        out = []
        for c in self.components:
            d = {"kind": type(c).__name__.lower()}
            d.update(c.__dict__)
            out.append(d)
        return {"name": self.name, "components": out}

    @classmethod
    def from_dict(cls, d: dict) -> "MixtureSpec":
        comps = []
        for c in d["components"]:
            c = dict(c)
            comps.append(_KINDS[c.pop("kind")](**c))
        return cls(tuple(comps), name=d.get("name", "custom"))


@dataclass(frozen=True)
class SampleSet:
    values: np.ndarray
    generation: int = 0

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float).ravel()
        if v.size == 0:
            raise ValueError("SampleSet must be non-empty")
        if not np.all(np.isfinite(v)):
            raise ValueError("SampleSet values must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        if self.generation < 0:
            raise ValueError("generation must be >= 0")

    def __len__(self):
        return self.values.size


def sample_component(c: Component, rng: np.random.Generator) -> np.ndarray:
    return c.draw(rng, c.count)


def sample_mixture(spec: MixtureSpec, rng: np.random.Generator) -> SampleSet:
    """Concatenate each component's draws in order, then shuffle."""
    values = np.concatenate([sample_component(c, rng) for c in spec.components])
    rng.shuffle(values)
    return SampleSet(values, generation=0)


def mixture_pdf(spec: MixtureSpec, x):
    x = np.asarray(x, dtype=float)
    return sum(w * c.pdf(x) for w, c in zip(spec.weights, spec.components))


def mixture_cdf(spec: MixtureSpec, x):
    x = np.asarray(x, dtype=float)
    return sum(w * c.cdf(x) for w, c in zip(spec.weights, spec.components))


PRESETS = {
    "two-gauss-uniform": MixtureSpec(
        (Normal(-2, 0.5, 300), Normal(3, 1.0, 300), Uniform(-4, -3, 200)),
        name="two-gauss-uniform",
    ),
    "three-gauss-uniform": MixtureSpec(
        (Normal(0, 0.1, 300), Normal(-2, 0.5, 300), Normal(3, 1.0, 300), Uniform(-4, -3, 200)),
        name="three-gauss-uniform",
    ),
    "gamma-mix": MixtureSpec(
        (Gamma(2, 4, 300), Normal(-2, 0.5, 300), Normal(3, 1.0, 300), Uniform(-4, -3, 200)),
        name="gamma-mix",
    ),
    # mean, std and size are our choice; only the 0.1 bandwidth is fixed upstream
    "gauss1d": MixtureSpec((Normal(0, 1, 1000),), name="gauss1d"),
}

MIXTURE_PRESETS = ("two-gauss-uniform", "three-gauss-uniform", "gamma-mix")


def get_preset(name: str) -> MixtureSpec:
    try:
        return PRESETS[name]
    except KeyError:
        raise ValueError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None
