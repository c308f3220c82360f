import numpy as np
import pytest
from hypothesis import given, strategies as st

from submodstab.dist import ProductDistribution, random_distribution

probs = st.lists(st.floats(0.05, 0.95), min_size=2, max_size=6)


def test_uniform_weights():
    d = ProductDistribution.uniform(3)
    assert d.is_uniform
    assert np.allclose(d.point_weights(), 1 / 8)
    assert d.p_min == 0.5


@given(probs)
def test_point_weights_sum_to_one(p):
    d = ProductDistribution(p)
    w = d.point_weights()
    assert w.min() > 0
    assert abs(w.sum() - 1.0) < 1e-12


@given(probs)
def test_point_weights_match_product(p):
    d = ProductDistribution(p)
    w = d.point_weights()
    for mask in range(2 ** len(p)):
        ref = 1.0
        for i, pi in enumerate(p):
            ref *= pi if (mask >> i) & 1 else 1 - pi
        assert abs(w[mask] - ref) < 1e-12
    assert d.p_min == min(min(p), 1 - max(p))


@given(probs)
def test_moments(p):
    d = ProductDistribution(p)
    assert np.allclose(d.mu, 2 * np.asarray(p) - 1)
    assert np.allclose(d.sigma**2, 1 - d.mu**2)


def test_expectation_of_coordinate():
    d = ProductDistribution([0.3, 0.8])
    # E[x_0] via table of the coordinate function x -> x_0
    coord = np.array([-1.0, 1.0, -1.0, 1.0])
    assert abs(d.expectation(coord) - d.mu[0]) < 1e-12


def test_sampling_sanity(rng):
    d = ProductDistribution([0.2, 0.9, 0.5])
    X = d.sample_points(20000, rng)
    assert X.shape == (20000, 3)
    assert set(np.unique(X)) == {-1, 1}
    assert np.abs(X.mean(axis=0) - d.mu).max() < 0.03


def test_dict_roundtrip():
    d = ProductDistribution([0.25, 0.75])
    d2 = ProductDistribution.from_dict(d.to_dict())
    assert np.array_equal(d.p, d2.p)


def test_validation():
    with pytest.raises(ValueError):
        ProductDistribution([0.5, 1.0])
    with pytest.raises(ValueError):
        ProductDistribution([])


def test_random_distribution_bounds(rng):
    for _ in range(50):
        d = random_distribution(4, rng)
        assert d.n == 4
        assert d.p.min() >= 0.05 and d.p.max() <= 0.95
