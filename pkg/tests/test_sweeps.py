import math

import numpy as np

from submodstab.cube import supermodular_square
from submodstab.dist import ProductDistribution
from submodstab.sweeps import (
    FOLKLORE_RHO_GRID,
    GENERATOR_FAMILIES,
    Instance,
    fmt_cell,
    generate_suite,
    lowdeg_sweep,
    pointwise_sweep,
    stability_sweep,
)


def test_generate_suite_shape():
    suite = generate_suite(20, [2, 3], seed=5)
    assert len(suite) == 20
    assert [i.family for i in suite[:4]] == list(GENERATOR_FAMILIES)
    assert {i.dist.n for i in suite} == {2, 3}
    assert all(i.f.n == i.dist.n for i in suite)
    # a fresh distribution per instance
    assert len({i.dist for i in suite}) > 10


def test_generate_suite_uniform_flag():
    suite = generate_suite(8, [3], seed=5, uniform=True)
    assert all(i.dist.is_uniform for i in suite)


def test_generate_suite_reproducible():
    a = generate_suite(10, [2, 4], seed=9)
    b = generate_suite(10, [2, 4], seed=9)
    assert all(
        np.array_equal(x.f.table(), y.f.table()) and x.dist == y.dist
        for x, y in zip(a, b)
    )


def test_fmt_cell():
    assert fmt_cell("x") == "x"
    assert fmt_cell(True) == "True"
    assert fmt_cell(3) == "3"
    assert fmt_cell(0.1) == "0.1"
    assert fmt_cell(np.float64(0.1)) == "0.1"
    assert fmt_cell(np.int64(7)) == "7"
    assert float(fmt_cell(1 / 3)) == 1 / 3  # round-trip exact


def test_stability_sweep_rows_and_ratios():
    suite = generate_suite(12, [2, 3], seed=1)
    res = stability_sweep(suite, rho_grid=[0.0, 0.5, 1.0])
    assert res.ok
    assert len(res.rows) == 12 * 3
    assert len(res.norm_ratios) == 12
    assert all(r >= 1.0 or math.isinf(r) for r in res.norm_ratios)
    row = res.rows[0].csv()
    assert len(row.split(",")) == len(res.header.split(","))


def test_pointwise_sweep_negative_control():
    suite = generate_suite(4, [3], seed=2)
    suite.append(
        Instance(4, "supermodular_square", supermodular_square(4), ProductDistribution.uniform(4))
    )
    res = pointwise_sweep(suite, rho_grid=[0.5])
    assert not res.ok
    bad = [r for r in res.rows if r.values[-1] == "FAIL"]
    assert bad and all(r.instance == 4 for r in bad)


def test_lowdeg_sweep():
    suite = generate_suite(6, [3, 4], seed=3)
    res = lowdeg_sweep(suite)
    assert res.ok
    assert len(res.rows) == 6 * len(FOLKLORE_RHO_GRID)
    assert math.isfinite(res.min_slack)
