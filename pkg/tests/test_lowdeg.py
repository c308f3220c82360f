import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from submodstab.cube import DenseTable, GraphCut, random_submodular
from submodstab.dist import ProductDistribution, random_distribution
from submodstab.fourier import transform
from submodstab.lowdeg import (
    LOW_DEGREE_CONSTANT,
    TruncatedPolynomial,
    approx_error,
    check_folklore_lemma,
    degree_for_accuracy,
    tail_mass,
    truncate,
)
from submodstab._bits import popcounts

tables = st.integers(2, 4).flatmap(
    lambda n: st.lists(
        st.floats(-3, 3, allow_nan=False), min_size=2**n, max_size=2**n
    )
)


def test_constant_value():
    assert abs(LOW_DEGREE_CONSTANT - 2.0 / (1.0 - math.exp(-2.0))) < 1e-15
    assert abs(LOW_DEGREE_CONSTANT - 2.3130352854993315) < 1e-15


def test_truncate_keeps_low_masks(rng):
    dist = random_distribution(4, rng)
    f = DenseTable(rng.uniform(-1, 1, size=16))
    p = truncate(transform(f, dist), 2)
    assert p.degree == 2
    assert popcounts(4)[p.masks].max() <= 2
    dense = p.dense_coeffs()
    full = transform(f, dist).coeffs
    keep = popcounts(4) <= 2
    assert np.allclose(dense[keep], full[keep])
    assert np.all(dense[~keep] == 0)


@given(tables)
@settings(max_examples=40)
def test_truncation_error_equals_tail_mass(vals):
    # the projection property: E[(f - f^{<=d})^2] is exactly the tail mass
    vals = np.asarray(vals)
    n = int(np.log2(vals.size))
    f = DenseTable(vals)
    dist = ProductDistribution.uniform(n)
    e = transform(f, dist)
    for d in range(n + 1):
        p = truncate(e, d)
        err = approx_error(f, p)
        assert abs(err - tail_mass(e, d)) < 1e-9 * max(1.0, abs(err))


def test_truncation_error_biased(rng):
    for _ in range(10):
        n = int(rng.integers(2, 6))
        dist = random_distribution(n, rng)
        f = random_submodular(n, "coverage", rng)
        e = transform(f, dist)
        d = int(rng.integers(0, n + 1))
        assert abs(approx_error(f, truncate(e, d)) - tail_mass(e, d)) < 1e-8


def test_polynomial_eval_matches_table(rng):
    dist = random_distribution(3, rng)
    f = DenseTable(rng.uniform(-1, 1, size=8))
    p = truncate(transform(f, dist), 1)
    from submodstab._bits import bit_matrix

    X = 2 * bit_matrix(3) - 1
    assert np.abs(p.evaluate_points(X) - p.table()).max() < 1e-10


def test_polynomial_validation(rng):
    dist = ProductDistribution.uniform(2)
    with pytest.raises(ValueError):
        TruncatedPolynomial(dist, 0, np.array([0, 1]), np.array([1.0, 2.0]))
    with pytest.raises(ValueError):
        TruncatedPolynomial(dist, 1, np.array([0]), np.array([1.0, 2.0]))


def test_folklore_cut_frozen():
    rep = check_folklore_lemma(
        GraphCut(2, [(0, 1, 1.0)]), 0.5, ProductDistribution.uniform(2)
    )
    # unit-norm cut has Stab_.5 = .625, gamma = .1875; degree 4 caps at n=2
    assert rep.ok
    assert rep.degree == 4
    assert abs(rep.gamma - 0.1875) < 1e-12
    assert rep.error == 0.0


def test_folklore_on_random_suite(rng):
    for _ in range(25):
        n = int(rng.integers(2, 8))
        fam = ("cut", "coverage", "budget_additive", "uniform_matroid")[
            int(rng.integers(0, 4))
        ]
        f = random_submodular(n, fam, rng)
        dist = random_distribution(n, rng)
        for rho in (0.5, 0.75, 0.9):
            rep = check_folklore_lemma(f, rho, dist)
            assert rep.ok, (n, fam, rho, rep)
            assert rep.error <= rep.bound


def test_folklore_rejects_rho_one():
    with pytest.raises(ValueError):
        check_folklore_lemma(
            GraphCut(2, [(0, 1, 1.0)]), 1.0, ProductDistribution.uniform(2)
        )


def test_degree_for_accuracy_frozen():
    rho, d = degree_for_accuracy(0.1, 0.5)
    assert abs(rho - 0.9913533528323661) < 1e-12
    assert d == 232
    rho2, d2 = degree_for_accuracy(0.3, 0.5)
    assert d2 == 26
    # weaker stability guarantee at small p_min forces a higher degree
    _, d3 = degree_for_accuracy(0.3, 0.1)
    assert d3 == 47 > d2


def test_degree_for_accuracy_validation():
    with pytest.raises(ValueError):
        degree_for_accuracy(0.0, 0.5)
    with pytest.raises(ValueError):
        degree_for_accuracy(1.5, 0.5)
