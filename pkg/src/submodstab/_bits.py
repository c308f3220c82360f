"""Bitmask helpers shared across the package.

Convention used everywhere: a subset S of the ground set [n] and a point
x in {-1,1}^n are both encoded by the same integer bitmask k, where bit i
of k is set  <=>  i in S  <=>  x_i = +1.
"""

from __future__ import annotations

import numpy as np


def popcounts(n: int) -> np.ndarray:
    """Popcount of every mask in [0, 2^n), as an int64 array."""
    masks = np.arange(2**n, dtype=np.uint64)
    return np.bitwise_count(masks).astype(np.int64)


def mask_to_point(mask: int, n: int) -> np.ndarray:
    """Decode a bitmask into a +-1 coordinate vector of length n."""
    bits = (mask >> np.arange(n)) & 1
    return (2 * bits - 1).astype(np.int8)


def point_to_mask(x: np.ndarray) -> int:
    """Encode a +-1 coordinate vector as a bitmask (x_i = +1 sets bit i)."""
    x = np.asarray(x)
    bits = (x > 0).astype(np.uint64)
    return int((bits << np.arange(len(x), dtype=np.uint64)).sum())


def points_to_masks(X: np.ndarray) -> np.ndarray:
    """Row-wise point_to_mask for an (m, n) matrix of +-1 entries."""
    X = np.asarray(X)
    bits = (X > 0).astype(np.uint64)
    powers = np.uint64(1) << np.arange(X.shape[1], dtype=np.uint64)
    return (bits * powers).sum(axis=1).astype(np.int64)


def bit_matrix(n: int) -> np.ndarray:
    """(2^n, n) 0/1 matrix; row k column i is bit i of mask k."""
    masks = np.arange(2**n, dtype=np.int64)
    return ((masks[:, None] >> np.arange(n)) & 1).astype(np.int8)


def mask_to_indices(mask: int) -> list[int]:
    """Sorted element indices of a subset bitmask."""
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def format_subset(mask: int) -> str:
    """Human-readable subset, e.g. '{0,2,3}' ('{}' for the empty set)."""
    return "{" + ",".join(str(i) for i in mask_to_indices(mask)) + "}"


def masks_up_to_degree(n: int, d: int) -> np.ndarray:
    """All subset masks with |S| <= d, sorted by (|S|, mask)."""
    pc = popcounts(n)
    masks = np.arange(2**n, dtype=np.int64)
    keep = masks[pc <= d]
    order = np.lexsort((keep, pc[keep]))
    return keep[order]
