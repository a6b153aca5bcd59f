"""Recursive fit -> sample -> measure -> refit chains and seeded ensembles."""
from __future__ import annotations

import dataclasses
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from .distributions import MixtureSpec, SampleSet, get_preset, make_rng, sample_mixture
from .estimators import (
    fit_gaussian,
    fit_kde,
    gaussian_sample,
    kde_log_density,
    kde_sample,
)
from .metrics import (
    DEFAULT_BINS,
    Histogram,
    gaussian_w2_squared,
    histogram_density,
    kl_divergence,
    shared_range,
    wasserstein1,
)
from .theory import SampleSchedule, expected_w2_squared, predicted_variance

ESTIMATORS = ("kde", "gaussian")
SNAPSHOT_BINS = 30

# per-preset defaults; anything not listed falls back to the ChainConfig defaults
PRESET_DEFAULTS = {
    "gauss1d": dict(bandwidth=0.1, sample_size=1000, iterations=300, snapshot_every=12),
}

RECORD_FIELDS = (
    "kl",
    "w1",
    "sample_mean",
    "sample_variance",
    "predicted_variance",
    "expected_w2sq",
    "gaussian_w2sq",
)
THEORY_FIELDS = ("predicted_variance", "expected_w2sq", "gaussian_w2sq")


@dataclass(frozen=True)
class ChainConfig:
    source: Union[str, MixtureSpec] = "two-gauss-uniform"
    estimator: str = "kde"
    bandwidth: float = 0.5
    iterations: int = 30
    sample_size: int = 30000
    kl_bins: int = DEFAULT_BINS
    snapshot_every: int = 3
    seed: int = 0

    def __post_init__(self):
        if self.estimator not in ESTIMATORS:
            raise ValueError(f"estimator must be one of {ESTIMATORS}, got {self.estimator!r}")
        if not self.bandwidth > 0:
            raise ValueError("bandwidth must be > 0")
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if self.sample_size < 2:
            raise ValueError("sample_size must be >= 2")
        if self.kl_bins < 1:
            raise ValueError("kl_bins must be >= 1")
        if self.snapshot_every < 1:
            raise ValueError("snapshot_every must be >= 1")
        if isinstance(self.source, str):
            get_preset(self.source)

    @property
    def spec(self) -> MixtureSpec:
        return get_preset(self.source) if isinstance(self.source, str) else self.source

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        if isinstance(self.source, MixtureSpec):
            d["source"] = self.source.to_dict()
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ChainConfig":
        d = dict(d)
        if isinstance(d.get("source"), dict):
            d["source"] = MixtureSpec.from_dict(d["source"])
        return cls(**d)


def preset_config(name: str, **overrides) -> ChainConfig:
    """ChainConfig for a named preset with its defaults, then ``overrides``."""
    kw = dict(PRESET_DEFAULTS.get(name, {}))
    kw.update({k: v for k, v in overrides.items() if v is not None})
    return ChainConfig(source=name, **kw)


@dataclass(frozen=True)
class GenerationRecord:
    generation: int
    kl: float
    w1: float
    sample_mean: float
    sample_variance: float
    predicted_variance: Optional[float] = None
    expected_w2sq: Optional[float] = None
    gaussian_w2sq: Optional[float] = None


@dataclass(frozen=True)
class Snapshot:
    generation: int
    histogram: Histogram
    original: Histogram


@dataclass
class ChainResult:
    config: ChainConfig
    records: list
    snapshots: list = field(default_factory=list)
    original: Optional[SampleSet] = None
    final: Optional[SampleSet] = None
    generations: Optional[list] = None

    def series(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.records], dtype=float)


def _snapshot(gen, samples, original):
    rng_ = shared_range(samples, original)
    return Snapshot(
        gen,
        histogram_density(samples, SNAPSHOT_BINS, rng_),
        histogram_density(original, SNAPSHOT_BINS, rng_),
    )


def run_chain(config: ChainConfig, keep_samples: bool = False) -> ChainResult:
    """Run one chain. Every generation is scored against the generation-0 data.

    Theory columns (Gaussian estimator only), for generation i:
      predicted_variance  uses sizes M_0..M_{i-1} and the exact source variance;
      gaussian_w2sq       is W2^2 between the fit to the original data and the
                          fit to generation i;
      expected_w2sq       its leading-order mean, sizes M_1..M_i, with the
                          source-fit variance as base.

    ``keep_samples`` retains every generation's SampleSet, generation 0
    included, as ``result.generations`` (memory heavy at large sample sizes).
    """
    rng = make_rng(config.seed)
    spec = config.spec
    M = config.sample_size
    original = sample_mixture(spec, rng)
    gaussian = config.estimator == "gaussian"
    if gaussian:
        model = source_fit = fit_gaussian(original)
        src_var = spec.variance()
    else:
        model = fit_kde(original, config.bandwidth)

    records, snapshots, kept = [], [], [original]
    samples = original
    for i in range(1, config.iterations + 1):
        if gaussian:
            samples = gaussian_sample(model, M, rng, generation=i)
        else:
            samples = kde_sample(model, M, rng, generation=i)

        v = samples.values
        theory = {}
        if gaussian:
            model = fit_gaussian(samples)
            theory = dict(
                predicted_variance=predicted_variance(
                    SampleSchedule((original.values.size,) + (M,) * (i - 1), src_var)),
                expected_w2sq=expected_w2_squared(
                    SampleSchedule((M,) * i, source_fit.variance))
                if source_fit.variance > 0 else 0.0,
                gaussian_w2sq=gaussian_w2_squared(source_fit, model),
            )
        else:
            model = fit_kde(samples, config.bandwidth)

        records.append(GenerationRecord(
            generation=i,
            kl=kl_divergence(samples, original, config.kl_bins),
            w1=wasserstein1(samples, original),
            sample_mean=float(v.mean()),
            sample_variance=float(v.var(ddof=1)),
            **theory,
        ))
        if i % config.snapshot_every == 0:
            snapshots.append(_snapshot(i, samples, original))
        if keep_samples:
            kept.append(samples)

    return ChainResult(config, records, snapshots, original=original, final=samples,
                       generations=kept if keep_samples else None)


def count_modes(samples: SampleSet, bandwidth: float, grid_points: int = 512,
                min_relative_height: float = 0.0) -> int:
    """Strict interior local maxima of the KDE on a uniform grid spanning the
    sample range padded by 3 bandwidths.

    Every maximum counts by default, including minute bumps in sparse tails.
    ``min_relative_height`` drops maxima lower than that fraction of the
    tallest one.
    """
    if grid_points < 3:
        raise ValueError("grid_points must be >= 3")
    m = fit_kde(samples, bandwidth)
    v = samples.values
    grid = np.linspace(v.min() - 3 * bandwidth, v.max() + 3 * bandwidth, grid_points)
    d = kde_log_density(m, grid)
    # a flat top spanning several grid points counts once
    d = d[np.r_[True, d[1:] != d[:-1]]]
    peaks = (d[1:-1] > d[:-2]) & (d[1:-1] > d[2:])
    if min_relative_height > 0:
        peaks &= d[1:-1] >= d.max() + np.log(min_relative_height)
    return int(peaks.sum())


@dataclass
class EnsembleResult:
    config: ChainConfig
    chains: int
    generations: np.ndarray
    mean: dict
    std: dict
    # per-chain series, shape (chains, iterations); None for absent theory columns
    values: dict
    # variance of all generation-i samples pooled across chains
    pooled_variance: np.ndarray

    def records(self) -> list:
        """Per-generation ensemble means as GenerationRecords."""
        out = []
        for k, g in enumerate(self.generations):
            kw = {f: (None if self.mean[f] is None else float(self.mean[f][k]))
                  for f in RECORD_FIELDS}
            out.append(GenerationRecord(int(g), **kw))
        return out


def chain_seed(base: int, index: int) -> int:
    """Seed of ensemble member ``index``: plain ``base + index``."""
    return base + index


def _chain_series(config: ChainConfig) -> dict:
    res = run_chain(config)
    out = {}
    for f in RECORD_FIELDS:
        col = [getattr(r, f) for r in res.records]
        out[f] = None if col[0] is None else np.array(col, dtype=float)
    return out


def aggregate(config: ChainConfig, members: dict) -> EnsembleResult:
    """Combine ``{chain_index: series}``; stacking is by index, so the order in
    which chains finished is irrelevant."""
    order = sorted(members)
    values, mean, std = {}, {}, {}
    for f in RECORD_FIELDS:
        if members[order[0]][f] is None:
            values[f] = mean[f] = std[f] = None
            continue
        arr = np.stack([members[k][f] for k in order])
        values[f] = arr
        mean[f] = arr.mean(axis=0)
        std[f] = arr.std(axis=0)
    M = config.sample_size
    within = values["sample_variance"] * (M - 1) / M
    pooled = within.mean(axis=0) + values["sample_mean"].var(axis=0)
    return EnsembleResult(
        config=config,
        chains=len(order),
        generations=np.arange(1, config.iterations + 1),
        mean=mean,
        std=std,
        values=values,
        pooled_variance=pooled,
    )


def run_ensemble(config: ChainConfig, chains: int, workers: int = 1) -> EnsembleResult:
    """Run ``chains`` independent chains seeded ``config.seed + k``."""
    if chains < 1:
        raise ValueError("chains must be >= 1")
    configs = {k: dataclasses.replace(config, seed=chain_seed(config.seed, k))
               for k in range(chains)}
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            futures = {k: ex.submit(_chain_series, c) for k, c in configs.items()}
            members = {k: f.result() for k, f in futures.items()}
    else:
        members = {k: _chain_series(c) for k, c in configs.items()}
    return aggregate(config, members)
