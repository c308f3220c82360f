"""Degree truncation and the low-degree approximation guarantee.

A function with ||f||_2 = 1 and Stab_rho(f) >= 1 - 2*gamma is within
squared error (2 / (1 - e^-2)) * gamma of its degree-ceil(2/(1-rho))
truncation.  Chaining through the stability lower bound for non-negative
submodular functions, gamma <= (1 - rho)(1 - p_min) at unit norm, which
yields the degree schedule used by the learner.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._bits import masks_up_to_degree, popcounts
from .cube import CubeFunction, DenseTable
from .dist import ProductDistribution
from .fourier import (
    FourierExpansion,
    basis_column,
    inverse_table,
    norm2_squared,
    transform,
)
from .noise import SLACK_TOL, stability_from_expansion

# Constant in the truncation-error bound: 2 / (1 - e^-2).
LOW_DEGREE_CONSTANT = 2.0 / (1.0 - math.exp(-2.0))


def _degree_for_rho(rho: float) -> int:
    """ceil(2 / (1 - rho)), guarding against float noise at exact integers
    (1 - 0.9 lands a hair below 0.1, which would bump the ceiling to 21)."""
    ratio = 2.0 / (1.0 - rho)
    return math.ceil(ratio * (1.0 - 1e-12))


@dataclass(frozen=True, eq=False)
class TruncatedPolynomial:
    """Multilinear polynomial holding only coefficients with |S| <= degree.

    masks and coeffs are parallel arrays, sorted by (|S|, mask).
    """

    dist: ProductDistribution
    degree: int
    masks: np.ndarray = field()
    coeffs: np.ndarray = field()

    def __init__(self, dist, degree, masks, coeffs):
        masks = np.asarray(masks, dtype=np.int64).copy()
        coeffs = np.asarray(coeffs, dtype=np.float64).copy()
        if masks.size != coeffs.size:
            raise ValueError("masks and coeffs must be parallel")
        pc = np.bitwise_count(masks.astype(np.uint64)).astype(np.int64)
        if masks.size and int(pc.max()) > degree:
            raise ValueError("a stored coefficient exceeds the declared degree")
        order = np.lexsort((masks, pc))
        masks, coeffs = masks[order], coeffs[order]
        masks.setflags(write=False)
        coeffs.setflags(write=False)
        object.__setattr__(self, "dist", dist)
        object.__setattr__(self, "degree", int(degree))
        object.__setattr__(self, "masks", masks)
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def n(self) -> int:
        return self.dist.n

    def as_dict(self) -> dict[int, float]:
        return {int(m): float(c) for m, c in zip(self.masks, self.coeffs)}

    def dense_coeffs(self) -> np.ndarray:
        full = np.zeros(2**self.n)
        full[self.masks] = self.coeffs
        return full

    def evaluate_points(self, X: np.ndarray) -> np.ndarray:
        """Evaluate on the rows of an (m, n) +-1 matrix."""
        X = np.asarray(X)
        out = np.zeros(X.shape[0])
        for m, c in zip(self.masks, self.coeffs):
            out += c * basis_column(self.dist, int(m), X)
        return out

    def table(self) -> np.ndarray:
        """Dense table over all 2^n points."""
        return inverse_table(FourierExpansion(self.dist, self.dense_coeffs()))

    def to_function(self) -> DenseTable:
        return DenseTable(self.table())


def truncate(e: FourierExpansion, d: int) -> TruncatedPolynomial:
    """Keep exactly the coefficients with |S| <= d."""
    if not 0 <= d <= e.n:
        raise ValueError("degree must lie in [0, n]")
    masks = masks_up_to_degree(e.n, d)
    return TruncatedPolynomial(e.dist, d, masks, e.coeffs[masks])


def approx_error(f: CubeFunction, p: TruncatedPolynomial) -> float:
    """E[(f - p)^2] under p's distribution, by exact enumeration."""
    if f.n != p.n:
        raise ValueError("dimension mismatch")
    w = p.dist.point_weights()
    diff = f.table() - p.table()
    return float((w * diff * diff).sum())


def tail_mass(e: FourierExpansion, d: int) -> float:
    """sum_{|S| > d} fhat(S)^2 (equals approx_error against the truncation)."""
    profile = FourierExpansion(e.dist, e.coeffs).degree_profile()
    return float(profile[d + 1 :].sum()) if d + 1 <= e.n else 0.0


@dataclass(frozen=True)
class FolkloreReport:
    """One verification of the truncation-error bound at noise rate rho."""

    ok: bool
    rho: float
    gamma: float
    degree: int  # ceil(2 / (1 - rho)), before capping at n
    error: float
    bound: float

    def __bool__(self) -> bool:
        return self.ok


def check_folklore_lemma(
    f: CubeFunction,
    rho: float,
    dist: ProductDistribution,
    tol: float = SLACK_TOL,
) -> FolkloreReport:
    """Verify the low-degree approximation bound for one (f, rho).

    f is rescaled internally to unit L2 norm; gamma is read off the exact
    stability, the truncation degree is ceil(2/(1-rho)), and the squared
    truncation error must stay below LOW_DEGREE_CONSTANT * gamma (+ tol).
    """
    if not 0.0 <= rho < 1.0:
        raise ValueError("rho must lie in [0, 1)")
    norm2sq = norm2_squared(f, dist)
    if norm2sq <= 0.0:
        raise ValueError("cannot scale the zero function to unit norm")
    unit = DenseTable(f.table() / math.sqrt(norm2sq))
    e = transform(unit, dist)
    stab = stability_from_expansion(e, rho)
    gamma = (1.0 - stab) / 2.0
    d = _degree_for_rho(rho)
    error = tail_mass(e, min(d, e.n))
    bound = LOW_DEGREE_CONSTANT * gamma
    return FolkloreReport(
        ok=bool(error <= bound + tol),
        rho=rho,
        gamma=gamma,
        degree=d,
        error=error,
        bound=bound,
    )


def degree_for_accuracy(eps: float, p_min: float) -> tuple[float, int]:
    """Noise rate and truncation degree for a target accuracy eps.

    Solves LOW_DEGREE_CONSTANT * (1 - rho)(1 - p_min) = eps^2 for rho
    (gamma = (1 - rho)(1 - p_min) at unit norm for non-negative submodular
    targets), clamps rho into [0, 1), and returns d = ceil(2 / (1 - rho)).
    """
    if not 0.0 < eps < 1.0:
        raise ValueError("eps must lie in (0, 1)")
    if not 0.0 < p_min < 1.0:
        raise ValueError("p_min must lie in (0, 1)")
    one_minus_rho = eps**2 / (LOW_DEGREE_CONSTANT * (1.0 - p_min))
    rho = max(0.0, 1.0 - one_minus_rho)
    d = _degree_for_rho(rho)
    return rho, d
