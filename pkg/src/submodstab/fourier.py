"""Exact Fourier analysis on {-1,1}^n under a product distribution.

The basis is the closed-form orthonormalization of the parity characters:
phi_S(x) = prod_{i in S} (x_i - mu_i) / sigma_i with mu_i = 2 p_i - 1 and
sigma_i = 2 sqrt(p_i (1 - p_i)).  For the uniform distribution this is
exactly the parity chi_S, and the transform reduces to the (expectation
normalized) Walsh-Hadamard coefficients.

Coefficients are stored densely: coeffs[mask(S)] = E[f(x) phi_S(x)].
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._bits import mask_to_point, popcounts
from .cube import CubeFunction, DenseTable, MAX_DENSE_N
from .dist import ProductDistribution


@dataclass(frozen=True, eq=False)
class FourierExpansion:
    """Dense coefficient vector of f in the orthonormal basis for dist."""

    dist: ProductDistribution
    coeffs: np.ndarray = field()

    def __init__(self, dist: ProductDistribution, coeffs):
        coeffs = np.asarray(coeffs, dtype=np.float64).copy()
        if coeffs.size != 2**dist.n:
            raise ValueError("coefficient vector must have length 2^n")
        coeffs.setflags(write=False)
        object.__setattr__(self, "dist", dist)
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def n(self) -> int:
        return self.dist.n

    def degree_profile(self) -> np.ndarray:
        """Squared coefficient mass per degree: W[d] = sum_{|S|=d} fhat(S)^2."""
        return np.bincount(popcounts(self.n), weights=self.coeffs**2, minlength=self.n + 1)

    def total_mass(self) -> float:
        """Parseval mass, equal to E[f^2]."""
        return float(self.coeffs @ self.coeffs)


def _phi_values(dist: ProductDistribution) -> tuple[np.ndarray, np.ndarray]:
    """Per-coordinate basis values (phi_i(-1), phi_i(+1))."""
    p = dist.p
    lo = -np.sqrt(p / (1.0 - p))
    hi = np.sqrt((1.0 - p) / p)
    return lo, hi


def basis_value(dist: ProductDistribution, s: int, x: np.ndarray) -> float:
    """phi_S(x) for a subset mask and a +-1 point; phi_{} is identically 1."""
    if not 0 <= s < 2**dist.n:
        raise ValueError("subset mask out of range")
    x = np.asarray(x, dtype=np.float64)
    v = (x - dist.mu) / dist.sigma
    out = 1.0
    for i in range(dist.n):
        if (s >> i) & 1:
            out *= v[i]
    return float(out)


def basis_column(dist: ProductDistribution, s: int, X: np.ndarray) -> np.ndarray:
    """phi_S evaluated on every row of an (m, n) +-1 matrix."""
    lo, hi = _phi_values(dist)
    out = np.ones(X.shape[0])
    for i in range(dist.n):
        if (s >> i) & 1:
            out *= np.where(X[:, i] > 0, hi[i], lo[i])
    return out


def transform(f: CubeFunction, dist: ProductDistribution) -> FourierExpansion:
    """All 2^n coefficients fhat(S) = E[f phi_S] by a coordinate butterfly.

    Each stage mixes the two slices of coordinate i with weights
    (1-p_i, p_i): the even slot accumulates the conditional expectation and
    the odd slot accumulates the phi_i component, sqrt(p_i(1-p_i)) (f1 - f0).
    O(n 2^n) total, exact up to round-off.
    """
    if f.n != dist.n:
        raise ValueError("function and distribution dimensions differ")
    if f.n > MAX_DENSE_N:
        raise ValueError(f"n={f.n} too large")
    work = f.table().astype(np.float64).copy()
    p = dist.p
    for i in range(dist.n):
        shaped = work.reshape(-1, 2, 2**i)
        f0 = shaped[:, 0, :].copy()
        f1 = shaped[:, 1, :].copy()
        shaped[:, 0, :] = (1.0 - p[i]) * f0 + p[i] * f1
        shaped[:, 1, :] = np.sqrt(p[i] * (1.0 - p[i])) * (f1 - f0)
    return FourierExpansion(dist, work)


def transform_naive(f: CubeFunction, dist: ProductDistribution) -> FourierExpansion:
    """O(4^n) direct evaluation of every coefficient; cross-check oracle."""
    table = f.table()
    w = dist.point_weights()
    n = dist.n
    coeffs = np.zeros(2**n)
    for s in range(2**n):
        phis = np.array([basis_value(dist, s, mask_to_point(k, n)) for k in range(2**n)])
        coeffs[s] = float((w * table * phis).sum())
    return FourierExpansion(dist, coeffs)


def inverse_table(e: FourierExpansion) -> np.ndarray:
    """Dense table of sum_S fhat(S) phi_S, index = point bitmask."""
    work = e.coeffs.astype(np.float64).copy()
    lo, hi = _phi_values(e.dist)
    for i in range(e.n):
        shaped = work.reshape(-1, 2, 2**i)
        c0 = shaped[:, 0, :].copy()
        c1 = shaped[:, 1, :].copy()
        shaped[:, 0, :] = c0 + lo[i] * c1
        shaped[:, 1, :] = c0 + hi[i] * c1
    return work


def inverse(e: FourierExpansion, x: np.ndarray) -> float:
    """Evaluate the expansion at one +-1 point."""
    x = np.asarray(x, dtype=np.float64)
    if x.size != e.n:
        raise ValueError("point dimension mismatch")
    lo, hi = _phi_values(e.dist)
    per_coord = np.where(x > 0, hi, lo)
    v = np.array([1.0])
    for i in range(e.n):
        v = np.concatenate([v, v * per_coord[i]])
    return float(v @ e.coeffs)


def to_function(e: FourierExpansion) -> DenseTable:
    return DenseTable(inverse_table(e))


def inner_product(f: CubeFunction, g: CubeFunction, dist: ProductDistribution) -> float:
    """<f, g> = E[f g], exactly, by enumeration with product weights."""
    if f.n != g.n or f.n != dist.n:
        raise ValueError("dimension mismatch")
    w = dist.point_weights()
    return float((w * f.table() * g.table()).sum())


def norm2_squared(f: CubeFunction, dist: ProductDistribution) -> float:
    """||f||_2^2 = E[f^2]."""
    return inner_product(f, f, dist)


def estimate_coefficient(
    X: np.ndarray,
    y: np.ndarray,
    s: int,
    dist: ProductDistribution,
) -> tuple[float, float]:
    """Empirical estimate of fhat(S) = E[y phi_S(x)] with its standard error.

    X is an (m, n) matrix of +-1 points, y the m labels.
    """
    X = np.asarray(X)
    y = np.asarray(y, dtype=np.float64)
    if X.shape[0] == 0:
        raise ValueError("empty sample")
    vals = y * basis_column(dist, s, X)
    m = vals.size
    mean = float(vals.mean())
    stderr = float(vals.std(ddof=1) / np.sqrt(m)) if m > 1 else float("inf")
    return mean, stderr
