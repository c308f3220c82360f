"""Agnostic learning of bounded cube functions from labelled samples.

Two routes to a low-degree hypothesis: exact L1 polynomial regression
(a linear program over the orthonormal product basis, solved by the
in-repo simplex) and the statistical-query low-degree algorithm (one
mean query per basis coefficient).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._bits import bit_matrix, masks_up_to_degree, points_to_masks
from .cube import CubeFunction
from .dist import ProductDistribution
from .fourier import _phi_values, basis_column
from .lowdeg import TruncatedPolynomial
from .simplex import OPTIMAL, solve_lp

MAX_BASIS_FUNCTIONS = 5000


@dataclass(frozen=True, eq=False)
class Dataset:
    """Labelled sample: rows of X are points in {-1,1}^n, y the labels."""

    X: np.ndarray
    y: np.ndarray
    dist: ProductDistribution

    def __post_init__(self):
        if self.X.ndim != 2 or self.y.shape != (self.X.shape[0],):
            raise ValueError("X must be (m, n) with matching labels")
        if self.X.shape[1] != self.dist.n:
            raise ValueError("point dimension does not match the distribution")

    @property
    def m(self) -> int:
        return self.X.shape[0]

    @property
    def n(self) -> int:
        return self.X.shape[1]


@dataclass(frozen=True)
class NoiseSpec:
    """Label noise: none, additive (uniform in [-magnitude, magnitude]),
    or adversarial (floor(magnitude * m) labels overwritten by replacement).
    """

    kind: str = "none"
    magnitude: float = 0.0
    replacement: float = 0.0

    KINDS = ("none", "additive", "adversarial")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown noise kind {self.kind!r}")
        if self.magnitude < 0:
            raise ValueError("noise magnitude must be non-negative")
        if self.kind == "adversarial" and self.magnitude > 1:
            raise ValueError("adversarial fraction cannot exceed 1")

    @classmethod
    def parse(cls, text: str) -> "NoiseSpec":
        """Parse 'none', 'additive:0.1', or 'adversarial:0.1[:repl]'."""
        parts = text.split(":")
        kind = parts[0]
        if kind == "none":
            return cls()
        if len(parts) < 2:
            raise ValueError(f"noise spec {text!r} needs a magnitude")
        magnitude = float(parts[1])
        replacement = float(parts[2]) if len(parts) > 2 else 0.0
        return cls(kind, magnitude, replacement)


def generate_dataset(
    target: CubeFunction,
    dist: ProductDistribution,
    m: int,
    noise: NoiseSpec = NoiseSpec(),
    rng: np.random.Generator | None = None,
) -> Dataset:
    """Draw m points from dist and label them by target, plus chosen noise."""
    if m < 1:
        raise ValueError("need at least one sample")
    if rng is None:
        rng = np.random.default_rng(0)
    X = dist.sample_points(m, rng)
    y = target.evaluate_masks(points_to_masks(X)).astype(np.float64)
    if noise.kind == "additive" and noise.magnitude > 0:
        y = y + rng.uniform(-noise.magnitude, noise.magnitude, size=m)
    elif noise.kind == "adversarial":
        k = math.floor(noise.magnitude * m)
        if k > 0:
            idx = rng.choice(m, size=k, replace=False)
            y[idx] = noise.replacement
    return Dataset(X, y, dist)


@dataclass(frozen=True, eq=False)
class Hypothesis:
    """A truncated polynomial, optionally clamped to an output range."""

    poly: TruncatedPolynomial
    clamp: tuple[float, float] | None = None

    def evaluate_points(self, X: np.ndarray) -> np.ndarray:
        vals = self.poly.evaluate_points(X)
        if self.clamp is not None:
            vals = np.clip(vals, self.clamp[0], self.clamp[1])
        return vals

    def table(self) -> np.ndarray:
        t = self.poly.table()
        if self.clamp is not None:
            t = np.clip(t, self.clamp[0], self.clamp[1])
        return t


def design_matrix(
    X: np.ndarray, dist: ProductDistribution, d: int
) -> tuple[np.ndarray, np.ndarray]:
    """Columns phi_S(x) for |S| <= d; returns (matrix, masks)."""
    masks = masks_up_to_degree(dist.n, d)
    cols = [basis_column(dist, int(s), X) for s in masks]
    return np.column_stack(cols), masks


def _merge_duplicates(
    X: np.ndarray, y: np.ndarray, n: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Collapse repeated (x, y) pairs into weighted rows.

    The weighted L1 objective over merged rows equals the plain mean over
    the original sample, so the reduction is exact.  Returns (X', y', w)
    with w summing to the original sample count.
    """
    masks = points_to_masks(X)
    order = np.lexsort((y, masks))
    ms, ys = masks[order], y[order]
    new_group = np.ones(ms.size, dtype=bool)
    new_group[1:] = (ms[1:] != ms[:-1]) | (ys[1:] != ys[:-1])
    starts = np.flatnonzero(new_group)
    counts = np.diff(np.append(starts, ms.size))
    rep_masks = ms[starts]
    points = (2 * bit_matrix(n)[rep_masks] - 1).astype(np.int8)
    return points, ys[starts], counts.astype(np.float64)


def l1_poly_regression(
    data: Dataset,
    d: int,
    clamp: bool = False,
) -> tuple[Hypothesis, float]:
    """Degree-d polynomial minimizing mean absolute error, via one LP.

    The LP introduces a split residual u - v per distinct (x, y) pair and
    minimizes the weighted residual sum; the initial basis of residual
    slots makes phase 1 unnecessary.  Returns (hypothesis, training L1
    error).  With clamp=True the hypothesis output range is locked to
    [0, max label seen].
    """
    masks = masks_up_to_degree(data.n, d)
    n_basis = masks.size
    if n_basis > MAX_BASIS_FUNCTIONS:
        raise ValueError("basis too large for the LP fit")
    if data.m < n_basis:
        raise ValueError("need at least as many samples as basis functions")

    Xu, yu, w = _merge_duplicates(data.X, data.y, data.n)
    rows = yu.size
    Phi = np.column_stack([basis_column(data.dist, int(s), Xu) for s in masks])

    # columns: [a | b | u | v] for coefficients a - b and residuals u - v
    A = np.hstack([Phi, -Phi, np.eye(rows), -np.eye(rows)])
    cost = np.concatenate(
        [np.zeros(2 * n_basis), w / data.m, w / data.m]
    )
    basis0 = np.where(
        yu >= 0, 2 * n_basis + np.arange(rows), 2 * n_basis + rows + np.arange(rows)
    )
    res = solve_lp(A, yu, cost, initial_basis=basis0)
    if res.status != OPTIMAL:
        raise RuntimeError(f"L1 fit LP ended {res.status}; this is a bug")
    coeffs = res.x[:n_basis] - res.x[n_basis : 2 * n_basis]
    poly = TruncatedPolynomial(data.dist, d, masks, coeffs)
    rng_clamp = (0.0, float(data.y.max())) if clamp else None
    return Hypothesis(poly, rng_clamp), float(res.objective)


class QueryBudgetExceeded(RuntimeError):
    pass


@dataclass(eq=False)
class SQOracle:
    """Statistical queries against the joint (x ~ dist, y = target(x)).

    Answers E[g(x, y)] with the declared clipping applied, perturbed by at
    most tau: either uniform random in [-tau, tau] or the deterministic
    adversarial answer truth - tau * sign(truth).  Expectations are exact
    (full enumeration of the cube), so the tau = 0 answers are the truth.
    """

    target: CubeFunction
    dist: ProductDistribution
    tau: float = 0.0
    mode: str = "bounded-random"
    rng: np.random.Generator | None = None
    max_queries: int | None = None
    queries_used: int = field(default=0, init=False)

    MODES = ("bounded-random", "adversarial-deterministic")

    def __post_init__(self):
        if self.tau < 0:
            raise ValueError("tau must be non-negative")
        if self.mode not in self.MODES:
            raise ValueError(f"unknown SQ noise mode {self.mode!r}")
        if self.tau > 0 and self.mode == "bounded-random" and self.rng is None:
            raise ValueError("bounded-random noise needs an rng")

    def label_bound(self) -> float:
        return float(np.abs(self.target.table()).max())

    def query(self, g, bound: float) -> float:
        """Answer E[g(X, y)] for vectorized g, |g| declared <= bound."""
        if self.max_queries is not None and self.queries_used >= self.max_queries:
            raise QueryBudgetExceeded(
                f"SQ budget of {self.max_queries} queries exhausted"
            )
        self.queries_used += 1
        n = self.dist.n
        X = (2 * bit_matrix(n) - 1).astype(np.int8)
        y = self.target.table()
        vals = np.clip(np.asarray(g(X, y), dtype=np.float64), -bound, bound)
        truth = float(self.dist.point_weights() @ vals)
        if self.tau == 0.0:
            return truth
        if self.mode == "adversarial-deterministic":
            return truth - self.tau * (1.0 if truth >= 0 else -1.0)
        return truth + float(self.rng.uniform(-self.tau, self.tau))


def basis_sup_bound(dist: ProductDistribution, s: int) -> float:
    """sup_x |phi_S(x)|, the product of per-coordinate extremes."""
    lo, hi = _phi_values(dist)
    worst = np.maximum(np.abs(lo), np.abs(hi))
    bound = 1.0
    i = 0
    m = s
    while m:
        if m & 1:
            bound *= float(worst[i])
        m >>= 1
        i += 1
    return bound


def low_degree_algorithm_sq(oracle: SQOracle, d: int) -> Hypothesis:
    """Estimate every coefficient with |S| <= d by one SQ each."""
    dist = oracle.dist
    masks = masks_up_to_degree(dist.n, d)
    ybound = oracle.label_bound()
    coeffs = np.empty(masks.size)
    for i, s in enumerate(masks):
        s = int(s)
        bound = ybound * basis_sup_bound(dist, s)
        coeffs[i] = oracle.query(
            lambda X, y, s=s: y * basis_column(dist, s, X), bound
        )
    return Hypothesis(TruncatedPolynomial(dist, d, masks, coeffs))


@dataclass(frozen=True)
class NormEstimate:
    """Estimated L2 norm with a Hoeffding confidence half-width."""

    scale: float
    halfwidth: float  # on the second moment, not on the norm
    m: int
    confidence: float


def normalize_target(
    y: np.ndarray,
    label_bound: float,
    confidence: float = 0.999,
    max_halfwidth: float | None = None,
) -> NormEstimate:
    """Estimate ||f||_2 from labels via the empirical second moment.

    y squared lives in [0, label_bound^2], so Hoeffding gives a
    confidence interval of half-width B^2 sqrt(log(2/delta) / 2m) on the
    second moment.  Raises if that half-width misses max_halfwidth.
    """
    y = np.asarray(y, dtype=np.float64)
    if y.size == 0:
        raise ValueError("no labels")
    if label_bound <= 0:
        raise ValueError("label bound must be positive")
    if not 0 < confidence < 1:
        raise ValueError("confidence must be in (0, 1)")
    second = float((y * y).mean())
    delta = 1.0 - confidence
    halfwidth = label_bound**2 * math.sqrt(math.log(2.0 / delta) / (2 * y.size))
    if max_halfwidth is not None and halfwidth > max_halfwidth:
        raise ValueError(
            f"needs more samples: half-width {halfwidth:.3g} > {max_halfwidth:.3g}"
        )
    return NormEstimate(math.sqrt(second), halfwidth, y.size, confidence)


def eval_l1_error(h: Hypothesis, data: Dataset) -> float:
    """Mean absolute error of the hypothesis on the dataset."""
    if data.m == 0:
        raise ValueError("empty dataset")
    return float(np.abs(h.evaluate_points(data.X) - data.y).mean())


def empirical_opt(data: Dataset, pool) -> float:
    """Minimum mean absolute error over a finite pool of cube functions."""
    pool = list(pool)
    if not pool:
        raise ValueError("empty concept pool")
    masks = points_to_masks(data.X)
    best = math.inf
    for f in pool:
        err = float(np.abs(f.evaluate_masks(masks) - data.y).mean())
        best = min(best, err)
    return best
