import numpy as np
from hypothesis import given, strategies as st

from submodstab._bits import (
    bit_matrix,
    format_subset,
    mask_to_indices,
    mask_to_point,
    masks_up_to_degree,
    point_to_mask,
    points_to_masks,
    popcounts,
)


def test_popcounts_small():
    assert popcounts(3).tolist() == [bin(k).count("1") for k in range(8)]


@given(st.integers(2, 10), st.data())
def test_mask_point_roundtrip(n, data):
    mask = data.draw(st.integers(0, 2**n - 1))
    x = mask_to_point(mask, n)
    assert set(np.unique(x)) <= {-1, 1}
    assert point_to_mask(x) == mask


def test_points_to_masks_matches_scalar():
    n = 5
    X = 2 * bit_matrix(n) - 1
    masks = points_to_masks(X)
    assert masks.tolist() == list(range(2**n))


def test_bit_matrix_values():
    B = bit_matrix(2)
    assert B.tolist() == [[0, 0], [1, 0], [0, 1], [1, 1]]


def test_mask_to_indices():
    assert mask_to_indices(0) == []
    assert mask_to_indices(0b1011) == [0, 1, 3]


def test_format_subset():
    assert format_subset(0) == "{}"
    assert format_subset(0b101) == "{0,2}"


@given(st.integers(2, 8), st.integers(0, 8))
def test_masks_up_to_degree_complete_and_ordered(n, d):
    masks = masks_up_to_degree(n, d)
    pc = popcounts(n)
    expected = sorted(
        (k for k in range(2**n) if pc[k] <= d), key=lambda k: (int(pc[k]), k)
    )
    assert masks.tolist() == expected
