"""The resampling noise operator and noise-stability bounds.

T_rho averages f over inputs whose coordinates are kept with probability
rho and redrawn from the product distribution otherwise.  Spectrally this
damps each coefficient by rho^|S|, which is how the dense operator and the
stability functional are computed here; a direct-expectation path over all
(x, y) pairs is kept as an independent cross-check.

The two pointwise lower bounds and the stability lower bound implemented
by the checkers:

  * uniform:  T_rho f(x) >= rho f(x) + ((1-rho)/2) (f(-1^n) + f(1^n))
              for submodular f (and >= rho f(x) when f is non-negative);
  * product:  T_rho f(x) >= (2 rho - 1 + 2 p_min (1 - rho)) f(x)
              for non-negative submodular f;
  * global:   Stab_rho(f) >= (2 rho - 1 + 2 p_min (1 - rho)) ||f||_2^2.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ._bits import popcounts
from .cube import CubeFunction, DenseTable
from .dist import ProductDistribution
from .fourier import FourierExpansion, inverse_table, norm2_squared, transform

# Absolute slack tolerance for all inequality checks; true slack is >= 0,
# this only absorbs transform round-off.
SLACK_TOL = 1e-9


@dataclass(frozen=True)
class NoiseParams:
    rho: float
    dist: ProductDistribution

    def __post_init__(self):
        if not 0.0 <= self.rho <= 1.0:
            raise ValueError("rho must lie in [0, 1]")


def bound_constant(rho: float, p_min: float) -> float:
    """The stability lower-bound factor 2 rho - 1 + 2 p_min (1 - rho)."""
    return 2.0 * rho - 1.0 + 2.0 * p_min * (1.0 - rho)


def sample_noise(x: np.ndarray, params: NoiseParams, rng: np.random.Generator) -> np.ndarray:
    """One draw of the resampled point: keep each x_i w.p. rho, else redraw."""
    x = np.asarray(x)
    n = params.dist.n
    if x.size != n:
        raise ValueError("point dimension mismatch")
    keep = rng.random(n) < params.rho
    fresh = np.where(rng.random(n) < params.dist.p, 1, -1).astype(x.dtype)
    return np.where(keep, x, fresh)


def noise_weights(e: FourierExpansion, rho: float) -> np.ndarray:
    """Coefficients of T_rho f: fhat(S) damped by rho^|S| (0^0 = 1)."""
    return e.coeffs * rho ** popcounts(e.n).astype(np.float64)


def apply_noise_operator(f: CubeFunction, params: NoiseParams) -> DenseTable:
    """Dense table of T_rho f via the spectral identity."""
    e = transform(f, params.dist)
    damped = FourierExpansion(params.dist, noise_weights(e, params.rho))
    return DenseTable(inverse_table(damped))


def apply_noise_operator_direct(f: CubeFunction, params: NoiseParams) -> DenseTable:
    """O(4^n) direct expectation over all resample outcomes (oracle path).

    P[y | x] = prod_i [rho 1{y_i = x_i} + (1 - rho) pi_i(y_i)].
    """
    n = f.n
    table = f.table()
    p = params.dist.p
    rho = params.rho
    out = np.zeros(2**n)
    masks = np.arange(2**n, dtype=np.int64)
    for xm in range(2**n):
        prob = np.ones(2**n)
        for i in range(n):
            xi = (xm >> i) & 1
            yi = (masks >> i) & 1
            pi = np.where(yi == 1, p[i], 1.0 - p[i])
            prob *= rho * (yi == xi) + (1.0 - rho) * pi
        out[xm] = float(prob @ table)
    return DenseTable(out)


def stability(f: CubeFunction, params: NoiseParams) -> float:
    """Stab_rho(f) = sum_S rho^|S| fhat(S)^2."""
    e = transform(f, params.dist)
    return stability_from_expansion(e, params.rho)


def stability_from_expansion(e: FourierExpansion, rho: float) -> float:
    profile = e.degree_profile()
    return float((profile * rho ** np.arange(profile.size, dtype=np.float64)).sum())


def stability_definitional(f: CubeFunction, params: NoiseParams) -> float:
    """<f, T_rho f> computed without the spectral shortcut."""
    tf = apply_noise_operator(f, params)
    w = params.dist.point_weights()
    return float((w * f.table() * tf.values).sum())


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PointwiseReport:
    """Minimum slack of a pointwise inequality over all 2^n inputs."""

    ok: bool
    rho: float
    min_slack: float
    argmin: int  # point bitmask attaining the minimum slack
    weak_ok: Optional[bool] = None  # rho*f bound, non-negative f only
    weak_min_slack: Optional[float] = None
    weak_argmin: Optional[int] = None

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class StabilityReport:
    ok: bool
    rho: float
    p_min: float
    stab: float
    norm2sq: float
    bound: float  # c(rho, p_min) * ||f||_2^2
    slack: float

    def __bool__(self) -> bool:
        return self.ok


def check_pointwise_uniform(
    f: CubeFunction, rho: float, tol: float = SLACK_TOL
) -> PointwiseReport:
    """Check the uniform-distribution pointwise bound at every input.

    The strong form holds for any real-valued submodular f; the weak form
    (T_rho f >= rho f) is additionally checked when f is non-negative.
    A violation signals a bug or a non-submodular input.
    """
    n = f.n
    table = f.table()
    params = NoiseParams(rho, ProductDistribution.uniform(n))
    tf = apply_noise_operator(f, params).values
    endpoint_term = 0.5 * (1.0 - rho) * (table[0] + table[-1])
    slack = tf - (rho * table + endpoint_term)
    i = int(np.argmin(slack))
    report_args = dict(rho=rho, min_slack=float(slack[i]), argmin=i)
    if np.all(table >= 0.0):
        weak = tf - rho * table
        j = int(np.argmin(weak))
        report_args.update(
            weak_ok=bool(weak[j] >= -tol), weak_min_slack=float(weak[j]), weak_argmin=j
        )
    return PointwiseReport(ok=bool(slack[i] >= -tol), **report_args)


def check_pointwise_product(
    f: CubeFunction, params: NoiseParams, tol: float = SLACK_TOL
) -> PointwiseReport:
    """Check T_rho f(x) >= c(rho, p_min) f(x) at every input."""
    table = f.table()
    tf = apply_noise_operator(f, params).values
    c = bound_constant(params.rho, params.dist.p_min)
    slack = tf - c * table
    i = int(np.argmin(slack))
    return PointwiseReport(
        ok=bool(slack[i] >= -tol), rho=params.rho, min_slack=float(slack[i]), argmin=i
    )


def check_stability_bound(
    f: CubeFunction, params: NoiseParams, tol: float = SLACK_TOL
) -> StabilityReport:
    """Check Stab_rho(f) >= c(rho, p_min) ||f||_2^2, both sides exact."""
    e = transform(f, params.dist)
    stab = stability_from_expansion(e, params.rho)
    norm2sq = float(e.total_mass())
    c = bound_constant(params.rho, params.dist.p_min)
    bound = c * norm2sq
    slack = stab - bound
    return StabilityReport(
        ok=bool(slack >= -tol),
        rho=params.rho,
        p_min=params.dist.p_min,
        stab=stab,
        norm2sq=norm2sq,
        bound=bound,
        slack=slack,
    )


DEFAULT_RHO_GRID = np.round(np.arange(0.0, 1.0 + 1e-12, 0.05), 10)
