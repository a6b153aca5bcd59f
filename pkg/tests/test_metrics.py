import math

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st
from scipy import stats
from scipy.optimize import linear_sum_assignment

from modelcollapse.distributions import PRESETS, SampleSet, make_rng, sample_mixture
from modelcollapse.estimators import GaussianModel
from modelcollapse.metrics import (
    gaussian_w2_squared,
    histogram_density,
    kl_divergence,
    wasserstein1,
)

finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False, allow_subnormal=False)
samples = st.lists(finite, min_size=1, max_size=40).map(SampleSet)


def test_histogram_trivial():
    h = histogram_density(SampleSet([0.5]), 1, (0, 1))
    np.testing.assert_array_equal(h.densities, [1.0])
    h = histogram_density(SampleSet([0.25, 0.75]), 2, (0, 1))
    np.testing.assert_array_equal(h.densities, [1.0, 1.0])


def test_histogram_preset_normalised():
    s = sample_mixture(PRESETS["two-gauss-uniform"], make_rng(0))
    h = histogram_density(s, 100, (s.values.min(), s.values.max()))
    assert h.masses.sum() == pytest.approx(1.0, abs=1e-9)


def test_histogram_clamps_out_of_range():
    h = histogram_density(SampleSet([-5.0, 0.5, 9.0]), 2, (0, 1))
    np.testing.assert_allclose(h.masses, [1 / 3, 2 / 3])


def test_histogram_rejects_bad_range():
    with pytest.raises(ValueError):
        histogram_density(SampleSet([0.0]), 3, (1, 1))


@given(samples, st.integers(1, 50))
def test_histogram_matches_numpy_in_range(s, bins):
    lo, hi = s.values.min(), s.values.max()
    if lo == hi:
        hi = lo + 1
    assume(np.all(np.diff(np.linspace(lo, hi, bins + 1)) > 0))
    ref, edges = np.histogram(s.values, bins=bins, range=(lo, hi), density=True)
    h = histogram_density(s, bins, (lo, hi))
    np.testing.assert_allclose(h.densities, ref, rtol=1e-12)
    assert h.masses.sum() == pytest.approx(1.0, abs=1e-9)


def _kl_oracle(p, q, bins):
    lo = min(p.min(), q.min())
    hi = max(p.max(), q.max())
    hp, _ = np.histogram(p, bins=bins, range=(lo, hi), density=True)
    hq, _ = np.histogram(q, bins=bins, range=(lo, hi), density=True)
    hp = np.where(hp == 0, 1e-10, hp)
    hq = np.where(hq == 0, 1e-10, hq)
    return stats.entropy(hp, hq)


def test_kl_identical_is_zero():
    s = SampleSet(make_rng(0).normal(size=500))
    assert kl_divergence(s, s, 100) == 0.0


def test_kl_matches_direct_summation_oracle():
    rng = make_rng(4)
    p = rng.normal(0, 1, 10_000)
    q = rng.normal(1, 1, 10_000)
    got = kl_divergence(SampleSet(p), SampleSet(q), 100)
    assert got == pytest.approx(_kl_oracle(p, q, 100), rel=1e-12)
    assert 0.3 < got < 0.7  # roughly the continuous value 0.5


def test_kl_disjoint_supports_floor_arithmetic():
    # range [0,3], 10 bins of width .3; each set fills two bins with mass 1/2
    got = kl_divergence(SampleSet([0.0, 1.0]), SampleSet([2.0, 3.0]), 10)
    z = 1 + 8 * 3e-11
    expected = (1 - 6e-11) / z * math.log(0.5 / 3e-11)
    assert math.isfinite(got)
    assert got == pytest.approx(expected, rel=1e-12)
    assert got > 20


@given(samples, samples, st.integers(1, 30))
def test_kl_nonnegative_and_matches_oracle(p, q, bins):
    lo = min(p.values.min(), q.values.min())
    hi = max(p.values.max(), q.values.max())
    assume(lo == hi or np.all(np.diff(np.linspace(lo, hi, bins + 1)) > 0))
    got = kl_divergence(p, q, bins)
    assert got >= 0
    if lo < hi:
        assert got == pytest.approx(_kl_oracle(p.values, q.values, bins), rel=1e-9, abs=1e-12)


@given(samples)
def test_kl_self_is_exactly_zero(p):
    assert kl_divergence(p, p, 17) == 0.0


def test_w1_examples():
    assert wasserstein1(SampleSet([0.0]), SampleSet([1.0])) == 1.0
    s = SampleSet([3.0, -1.0, 2.5])
    assert wasserstein1(s, s) == 0.0
    assert wasserstein1(SampleSet([0.0, 0.0]), SampleSet([0.0, 1.0])) == 0.5


def _w1_pairing(a, b):
    cost = np.abs(a[:, None] - b[None, :])
    r, c = linear_sum_assignment(cost)
    return cost[r, c].mean()


@settings(max_examples=200)
@given(st.integers(1, 64).flatmap(
    lambda n: st.tuples(st.lists(finite, min_size=n, max_size=n),
                        st.lists(finite, min_size=n, max_size=n))))
def test_w1_equals_optimal_pairing(pair):
    a, b = map(np.array, pair)
    got = wasserstein1(SampleSet(a), SampleSet(b))
    assert got == pytest.approx(_w1_pairing(a, b), rel=1e-9, abs=1e-9)
    assert got == pytest.approx(np.mean(np.abs(np.sort(a) - np.sort(b))), rel=1e-12, abs=1e-12)


@given(samples, samples)
def test_w1_matches_scipy_unequal_sizes(p, q):
    assert wasserstein1(p, q) == pytest.approx(
        stats.wasserstein_distance(p.values, q.values), rel=1e-9, abs=1e-9)


@given(samples, samples)
def test_w1_symmetric(p, q):
    assert wasserstein1(p, q) == pytest.approx(wasserstein1(q, p), rel=1e-12, abs=1e-12)


@given(samples)
def test_w1_identity_on_permuted_multiset(p):
    shuffled = SampleSet(p.values[::-1])
    assert wasserstein1(p, shuffled) == 0.0


def test_w1_metric_axioms_random_triples():
    rng = make_rng(123)
    for _ in range(1000):
        a, b, c = (SampleSet(rng.normal(rng.uniform(-2, 2), rng.uniform(0.1, 3),
                                        rng.integers(1, 60))) for _ in range(3))
        ab, bc, ac = wasserstein1(a, b), wasserstein1(b, c), wasserstein1(a, c)
        assert ab == pytest.approx(wasserstein1(b, a), rel=1e-12, abs=1e-12)
        assert ac <= ab + bc + 1e-12


def test_w1_large_unequal_sizes():
    rng = make_rng(0)
    p = rng.normal(size=30_000)
    q = rng.normal(0.5, 1, 800)
    assert wasserstein1(SampleSet(p), SampleSet(q)) == pytest.approx(
        stats.wasserstein_distance(p, q), rel=1e-10)


def test_gaussian_w2_examples():
    a = GaussianModel(0.0, 1.0)
    assert gaussian_w2_squared(a, a) == 0.0
    assert gaussian_w2_squared(a, GaussianModel(2.0, 1.0)) == 4.0
    assert gaussian_w2_squared(a, GaussianModel(0.0, 4.0)) == 1.0


@given(finite, st.floats(0, 1e3), finite, st.floats(0, 1e3))
def test_gaussian_w2_symmetric(m1, v1, m2, v2):
    a, b = GaussianModel(m1, v1), GaussianModel(m2, v2)
    assert gaussian_w2_squared(a, b) == gaussian_w2_squared(b, a)
