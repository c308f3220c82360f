"""Batch verification sweeps over generated instances.

Shared by the CLI `verify` subcommand, the experiment scripts, and the
acceptance tests, so they all exercise the same code path.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .cube import CubeFunction, random_submodular
from .dist import ProductDistribution, random_distribution
from .fourier import transform
from .lowdeg import check_folklore_lemma
from .noise import (
    DEFAULT_RHO_GRID,
    NoiseParams,
    SLACK_TOL,
    bound_constant,
    check_pointwise_product,
    check_pointwise_uniform,
    stability_from_expansion,
)

GENERATOR_FAMILIES = ("cut", "coverage", "budget_additive", "uniform_matroid")
FOLKLORE_RHO_GRID = (0.5, 0.75, 0.9)


@dataclass(frozen=True, eq=False)
class Instance:
    index: int
    family: str
    f: CubeFunction
    dist: ProductDistribution


def generate_suite(
    count: int,
    n_values: Sequence[int],
    seed: int,
    uniform: bool = False,
    families: Sequence[str] = GENERATOR_FAMILIES,
) -> list[Instance]:
    """count instances cycling through families and sizes, one sampled
    product distribution each (or the uniform one)."""
    if count < 1:
        raise ValueError("need a positive instance count")
    n_values = list(n_values)
    if not n_values or min(n_values) < 2:
        raise ValueError("instance sizes must be >= 2")
    families = tuple(families)
    rng = np.random.default_rng(seed)
    out = []
    for i in range(count):
        family = families[i % len(families)]
        n = n_values[(i // len(families)) % len(n_values)]
        f = random_submodular(n, family, rng)
        dist = (
            ProductDistribution.uniform(n) if uniform else random_distribution(n, rng)
        )
        out.append(Instance(i, family, f, dist))
    return out


def fmt_cell(x) -> str:
    """Deterministic CSV cell: shortest round-trip repr for floats."""
    if isinstance(x, str):
        return x
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


@dataclass(frozen=True)
class SweepRow:
    instance: int
    family: str
    n: int
    p_min: float
    rho: float
    values: tuple  # suite-specific payload, already ordered for CSV

    def csv(self) -> str:
        cells = [self.instance, self.family, self.n, self.p_min, self.rho]
        return ",".join(fmt_cell(x) for x in cells + list(self.values))


@dataclass(frozen=True)
class SweepResult:
    ok: bool
    rows: list[SweepRow]
    header: str
    min_slack: float
    norm_ratios: list[float]  # ||f||_2^2 / E[f]^2 per instance, inf if E[f] = 0


def stability_sweep(
    instances: Sequence[Instance],
    rho_grid: Sequence[float] = DEFAULT_RHO_GRID,
    tol: float = SLACK_TOL,
) -> SweepResult:
    """Stability lower bound Stab_rho(f) >= (2rho-1+2p_min(1-rho))||f||^2."""
    rho_grid = [float(r) for r in rho_grid]
    rows = []
    ratios = []
    min_slack = np.inf
    ok = True
    for inst in instances:
        e = transform(inst.f, inst.dist)
        norm2sq = e.total_mass()
        mean = float(e.coeffs[0])
        ratios.append(norm2sq / mean**2 if mean != 0 else np.inf)
        pmin = inst.dist.p_min
        for rho in rho_grid:
            stab = stability_from_expansion(e, rho)
            bound = bound_constant(rho, pmin) * norm2sq
            slack = stab - bound
            min_slack = min(min_slack, slack)
            if slack < -tol:
                ok = False
            rows.append(
                SweepRow(
                    inst.index,
                    inst.family,
                    inst.dist.n,
                    pmin,
                    rho,
                    (stab, bound, slack, norm2sq),
                )
            )
    return SweepResult(
        ok, rows, "instance,family,n,pmin,rho,stab,bound,slack,norm2sq", min_slack, ratios
    )


def pointwise_sweep(
    instances: Sequence[Instance],
    rho_grid: Sequence[float] = DEFAULT_RHO_GRID,
    tol: float = SLACK_TOL,
) -> SweepResult:
    """Pointwise noise-operator lower bounds, at every cube point.

    Uniform instances get the two-endpoint form (and, when f >= 0, the
    weak form); biased instances get the product-measure constant.
    """
    rho_grid = [float(r) for r in rho_grid]
    rows = []
    min_slack = np.inf
    ok = True
    for inst in instances:
        for rho in rho_grid:
            if inst.dist.is_uniform:
                rep = check_pointwise_uniform(inst.f, rho, tol=tol)
            else:
                rep = check_pointwise_product(
                    inst.f, NoiseParams(rho, inst.dist), tol=tol
                )
            min_slack = min(min_slack, rep.min_slack)
            if not rep.ok:
                ok = False
            rows.append(
                SweepRow(
                    inst.index,
                    inst.family,
                    inst.dist.n,
                    inst.dist.p_min,
                    rho,
                    (rep.min_slack, rep.argmin, "pass" if rep.ok else "FAIL"),
                )
            )
    return SweepResult(
        ok, rows, "instance,family,n,pmin,rho,min_slack,argmin_mask,verdict", min_slack, []
    )


def lowdeg_sweep(
    instances: Sequence[Instance],
    rho_grid: Sequence[float] = FOLKLORE_RHO_GRID,
    tol: float = SLACK_TOL,
) -> SweepResult:
    """Truncation error against the stability-driven bound, per (f, rho)."""
    rho_grid = [float(r) for r in rho_grid]
    rows = []
    min_slack = np.inf
    ok = True
    for inst in instances:
        for rho in rho_grid:
            rep = check_folklore_lemma(inst.f, rho, inst.dist, tol=tol)
            slack = rep.bound - rep.error
            min_slack = min(min_slack, slack)
            if not rep.ok:
                ok = False
            rows.append(
                SweepRow(
                    inst.index,
                    inst.family,
                    inst.dist.n,
                    inst.dist.p_min,
                    rho,
                    (rep.gamma, rep.degree, rep.error, rep.bound, slack),
                )
            )
    return SweepResult(
        ok, rows, "instance,family,n,pmin,rho,gamma,d,error,bound,slack", min_slack, []
    )
