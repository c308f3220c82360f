import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import best_table_l1, brute_coefficient
from submodstab.cube import Coverage, DenseTable, GraphCut, random_submodular
from submodstab.dist import ProductDistribution, random_distribution
from submodstab.fourier import transform
from submodstab.lowdeg import truncate
from submodstab.learn import (
    Dataset,
    NoiseSpec,
    QueryBudgetExceeded,
    SQOracle,
    basis_sup_bound,
    empirical_opt,
    eval_l1_error,
    generate_dataset,
    l1_poly_regression,
    low_degree_algorithm_sq,
    normalize_target,
)
from submodstab._bits import bit_matrix, points_to_masks


def test_noise_spec_parse():
    assert NoiseSpec.parse("none") == NoiseSpec("none", 0.0)
    assert NoiseSpec.parse("additive:0.25") == NoiseSpec("additive", 0.25)
    assert NoiseSpec.parse("adversarial:0.1:-3") == NoiseSpec("adversarial", 0.1, -3.0)
    with pytest.raises(ValueError):
        NoiseSpec.parse("gauss:0.1")
    with pytest.raises(ValueError):
        NoiseSpec("adversarial", 1.5)


def test_adversarial_corruption_count(rng):
    f = GraphCut(4, [(0, 1, 1.0)])
    dist = ProductDistribution.uniform(4)
    m = 997
    data = generate_dataset(f, dist, m, NoiseSpec("adversarial", 0.1, -7.0), rng)
    clean = f.evaluate_masks(points_to_masks(data.X))
    assert int((data.y != clean).sum()) == int(0.1 * m)
    assert set(np.unique(data.y[data.y != clean])) == {-7.0}


def test_noiseless_recovery_matches_transform(rng):
    # a cut function has exact degree 2, so the fit must recover it
    f = GraphCut(5, [(0, 1, 1.0), (2, 3, 0.5), (1, 4, 2.0)])
    dist = random_distribution(5, rng)
    data = generate_dataset(f, dist, 600, NoiseSpec(), rng)
    hyp, train = l1_poly_regression(data, 2)
    assert train <= 1e-9
    exact = truncate(transform(f, dist), 2)
    assert np.abs(hyp.poly.coeffs - exact.coeffs).max() < 1e-7


def test_fit_optimum_matches_median_oracle(rng):
    # full-degree fit: LP optimum equals the pointwise weighted-median error
    f = random_submodular(4, "coverage", rng)
    dist = random_distribution(4, rng)
    data = generate_dataset(f, dist, 400, NoiseSpec("adversarial", 0.15), rng)
    _, train = l1_poly_regression(data, 4)
    assert abs(train - best_table_l1(data.X, data.y)) < 1e-9


def test_clamped_hypothesis_range(rng):
    f = random_submodular(3, "budget_additive", rng)
    dist = ProductDistribution.uniform(3)
    data = generate_dataset(f, dist, 100, NoiseSpec("additive", 0.3), rng)
    hyp, _ = l1_poly_regression(data, 3, clamp=True)
    X = 2 * bit_matrix(3) - 1
    vals = hyp.evaluate_points(X)
    assert vals.min() >= 0.0
    assert vals.max() <= data.y.max() + 1e-12


def test_regression_validates_sample_size(rng):
    f = GraphCut(3, [(0, 1, 1.0)])
    dist = ProductDistribution.uniform(3)
    data = generate_dataset(f, dist, 4, NoiseSpec(), rng)
    with pytest.raises(ValueError):
        l1_poly_regression(data, 3)  # 8 basis functions, 4 samples


def test_sq_oracle_exact_at_tau_zero(rng):
    f = random_submodular(4, "coverage", rng)
    dist = random_distribution(4, rng)
    oracle = SQOracle(f, dist, tau=0.0)
    from submodstab.fourier import basis_column

    for s in (0, 3, 0b1010):
        bound = oracle.label_bound() * basis_sup_bound(dist, s)
        got = oracle.query(lambda X, y, s=s: y * basis_column(dist, s, X), bound)
        assert abs(got - brute_coefficient(f, dist, s)) < 1e-12
    assert oracle.queries_used == 3


def test_sq_adversarial_deterministic():
    f = GraphCut(2, [(0, 1, 1.0)])
    dist = ProductDistribution.uniform(2)
    oracle = SQOracle(f, dist, tau=0.05, mode="adversarial-deterministic")
    got = oracle.query(lambda X, y: y, 1.0)
    assert abs(got - (0.5 - 0.05)) < 1e-15


def test_sq_bounded_random_within_tau(rng):
    f = GraphCut(2, [(0, 1, 1.0)])
    dist = ProductDistribution.uniform(2)
    oracle = SQOracle(f, dist, tau=0.1, mode="bounded-random", rng=rng)
    for _ in range(50):
        got = oracle.query(lambda X, y: y, 1.0)
        assert abs(got - 0.5) <= 0.1 + 1e-15


def test_sq_budget():
    f = GraphCut(2, [(0, 1, 1.0)])
    oracle = SQOracle(f, ProductDistribution.uniform(2), max_queries=2)
    oracle.query(lambda X, y: y, 1.0)
    oracle.query(lambda X, y: y, 1.0)
    with pytest.raises(QueryBudgetExceeded):
        oracle.query(lambda X, y: y, 1.0)


def test_sq_clipping():
    f = GraphCut(2, [(0, 1, 1.0)])
    oracle = SQOracle(f, ProductDistribution.uniform(2))
    # declared bound clips the integrand: labels [0,1,1,0] clipped to 0.25
    got = oracle.query(lambda X, y: y, 0.25)
    assert abs(got - 0.125) < 1e-15


def test_low_degree_sq_matches_truncation(rng):
    for _ in range(5):
        n = int(rng.integers(2, 6))
        f = random_submodular(n, "coverage", rng)
        dist = random_distribution(n, rng)
        d = int(rng.integers(1, n + 1))
        oracle = SQOracle(f, dist, tau=0.0)
        hyp = low_degree_algorithm_sq(oracle, d)
        exact = truncate(transform(f, dist), d)
        assert np.array_equal(hyp.poly.masks, exact.masks)
        assert np.abs(hyp.poly.coeffs - exact.coeffs).max() < 1e-12
        assert oracle.queries_used == exact.masks.size


def test_normalize_target_constant():
    est = normalize_target(np.full(500, 2.0), label_bound=2.0)
    assert est.scale == 2.0
    assert est.m == 500
    assert est.halfwidth > 0


def test_normalize_target_needs_samples():
    with pytest.raises(ValueError):
        normalize_target(np.ones(10), label_bound=5.0, max_halfwidth=1e-3)


def test_eval_and_opt(rng):
    f = GraphCut(3, [(0, 1, 1.0)])
    g = GraphCut(3, [(1, 2, 1.0)])
    dist = ProductDistribution.uniform(3)
    data = generate_dataset(f, dist, 200, NoiseSpec(), rng)
    assert empirical_opt(data, [f, g]) == 0.0
    hyp = low_degree_algorithm_sq(SQOracle(f, dist), 3)
    assert eval_l1_error(hyp, data) < 1e-10


@given(st.integers(0, 2**31 - 1))
@settings(max_examples=15)
def test_fit_never_beats_median_oracle(seed):
    # the LP is restricted to degree <= 1, so it can only do worse than
    # the unrestricted pointwise median fit, never better
    rng = np.random.default_rng(seed)
    f = random_submodular(3, "cut", rng)
    dist = ProductDistribution.uniform(3)
    data = generate_dataset(f, dist, 60, NoiseSpec("additive", 0.5), rng)
    _, train = l1_poly_regression(data, 1)
    assert train >= best_table_l1(data.X, data.y) - 1e-9
