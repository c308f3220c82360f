"""Product distributions on {-1,1}^n.

A product distribution is given by per-coordinate probabilities
p_i = Pr[x_i = +1], each strictly inside (0, 1).  The minimum probability
p_min is the two-sided min_i min(p_i, 1-p_i): the smallest probability of
any single-coordinate event, invariant under relabeling +1 <-> -1.  The
noise-stability constant 2 rho - 1 + 2 p_min (1 - rho) is only valid with
this symmetric form; taking min_i p_i alone admits counterexamples (a
single-edge cut under p = (0.9, 0.9) already violates the bound at
rho = 0).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class ProductDistribution:
    """Per-coordinate probabilities of drawing +1.

    Degenerate coordinates (p_i in {0, 1}) are rejected: they collapse the
    coordinate variance and the orthonormal basis is undefined there.
    """

    p: np.ndarray = field()

    def __init__(self, p):
        p = np.asarray(p, dtype=np.float64).copy()
        if p.ndim != 1 or p.size == 0:
            raise ValueError("p must be a non-empty 1-d array of probabilities")
        if np.any(p <= 0.0) or np.any(p >= 1.0):
            raise ValueError("every p_i must lie strictly in (0, 1)")
        p.setflags(write=False)
        object.__setattr__(self, "p", p)

    @classmethod
    def uniform(cls, n: int) -> "ProductDistribution":
        return cls(np.full(n, 0.5))

    @property
    def n(self) -> int:
        return int(self.p.size)

    @property
    def p_min(self) -> float:
        return float(np.minimum(self.p, 1.0 - self.p).min())

    @property
    def is_uniform(self) -> bool:
        return bool(np.all(self.p == 0.5))

    @property
    def mu(self) -> np.ndarray:
        """Coordinate means, mu_i = 2 p_i - 1."""
        return 2.0 * self.p - 1.0

    @property
    def sigma(self) -> np.ndarray:
        """Coordinate standard deviations, sigma_i = 2 sqrt(p_i (1 - p_i))."""
        return 2.0 * np.sqrt(self.p * (1.0 - self.p))

    def point_weights(self) -> np.ndarray:
        """Probability of every mask in [0, 2^n), index = point bitmask."""
        w = np.array([1.0])
        for pi in self.p:
            w = np.concatenate([w * (1.0 - pi), w * pi])
        return w

    def expectation(self, table: np.ndarray) -> float:
        """Exact E[f] for a dense table indexed by point bitmask."""
        table = np.asarray(table, dtype=np.float64)
        if table.size != 2**self.n:
            raise ValueError("table size does not match distribution dimension")
        return float(self.point_weights() @ table)

    def sample_points(self, m: int, rng: np.random.Generator) -> np.ndarray:
        """Draw m i.i.d. points as an (m, n) +-1 int8 matrix."""
        u = rng.random((m, self.n))
        return np.where(u < self.p, 1, -1).astype(np.int8)

    def to_dict(self) -> dict:
        return {"p": [float(v) for v in self.p]}

    @classmethod
    def from_dict(cls, d: dict) -> "ProductDistribution":
        if "uniform" in d:
            return cls.uniform(int(d["uniform"]))
        if "p" in d:
            return cls(d["p"])
        raise ValueError("distribution spec needs a 'p' list or a 'uniform' size")

    def __eq__(self, other) -> bool:
        return isinstance(other, ProductDistribution) and np.array_equal(self.p, other.p)

    def __hash__(self):
        return hash(self.p.tobytes())


def random_distribution(
    n: int,
    rng: np.random.Generator,
    low: float = 0.05,
    high: float = 0.95,
) -> ProductDistribution:
    """Random product distribution with p_i uniform in [low, high]."""
    if not 0.0 < low <= high < 1.0:
        raise ValueError("need 0 < low <= high < 1")
    return ProductDistribution(rng.uniform(low, high, size=n))
