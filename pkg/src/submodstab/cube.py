"""Set functions on the Boolean cube and their structural checks.

A function f maps subsets of [n] to reals.  Subsets, table indices, and
points of {-1,1}^n share one bitmask convention: bit i set <=> i in S
<=> x_i = +1.  Dense operations (densify, exhaustive checks) require
n <= 25.

Four structured families are provided; all of them are non-negative and
submodular by construction:

  * GraphCut        -- f(S) = total weight of edges crossing (S, [n]\\S)
  * Coverage        -- f(S) = weight of universe covered by the sets in S
  * BudgetAdditive  -- f(S) = min(sum of item weights in S, budget)
  * UniformMatroidRank -- f(S) = min(|S|, k)
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ._bits import bit_matrix, popcounts

MAX_DENSE_N = 25

# Absolute slack allowed by the structural checkers.  Structured families
# evaluate exactly in floating point at desk scale; the tolerance only
# absorbs round-off in tables produced by transforms.
SUBMODULARITY_TOL = 1e-9


class CubeFunction:
    """Base class; subclasses implement evaluate_masks."""

    n: int

    def evaluate(self, mask: int) -> float:
        """f(S) for a single subset bitmask."""
        if not 0 <= mask < 2**self.n:
            raise ValueError(f"mask {mask} out of range for n={self.n}")
        return float(self.evaluate_masks(np.array([mask], dtype=np.int64))[0])

    def evaluate_masks(self, masks: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def table(self) -> np.ndarray:
        """Dense table of all 2^n values, index = subset bitmask."""
        if self.n > MAX_DENSE_N:
            raise ValueError(f"n={self.n} too large for dense operations")
        return self.evaluate_masks(np.arange(2**self.n, dtype=np.int64))

    def to_dense(self) -> "DenseTable":
        return DenseTable(self.table())

    def to_dict(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True, eq=False)
class DenseTable(CubeFunction):
    values: np.ndarray

    def __init__(self, values):
        values = np.asarray(values, dtype=np.float64).copy()
        n = int(values.size).bit_length() - 1
        if values.size != 2**n or values.size == 0:
            raise ValueError("table length must be a power of two")
        if n > MAX_DENSE_N:
            raise ValueError(f"n={n} too large for dense operations")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def n(self) -> int:
        return int(self.values.size).bit_length() - 1

    def evaluate_masks(self, masks: np.ndarray) -> np.ndarray:
        return self.values[np.asarray(masks, dtype=np.int64)]

    def table(self) -> np.ndarray:
        return self.values

    def to_dense(self) -> "DenseTable":
        return self

    def to_dict(self) -> dict:
        return {"n": self.n, "kind": "dense", "table": [float(v) for v in self.values]}

    def __eq__(self, other):
        return isinstance(other, DenseTable) and np.array_equal(self.values, other.values)


@dataclass(frozen=True)
class GraphCut(CubeFunction):
    """Weighted undirected cut function; weights must be non-negative."""

    n: int
    edges: tuple  # of (i, j, w)

    def __init__(self, n: int, edges):
        edges = tuple((int(i), int(j), float(w)) for i, j, w in edges)
        for i, j, w in edges:
            if not (0 <= i < n and 0 <= j < n and i != j):
                raise ValueError(f"bad edge ({i},{j}) for n={n}")
            if w < 0:
                raise ValueError("edge weights must be non-negative")
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "edges", edges)

    def evaluate_masks(self, masks: np.ndarray) -> np.ndarray:
        masks = np.asarray(masks, dtype=np.int64)
        out = np.zeros(masks.shape, dtype=np.float64)
        for i, j, w in self.edges:
            out += w * (((masks >> i) ^ (masks >> j)) & 1)
        return out

    def to_dict(self) -> dict:
        return {"n": self.n, "kind": "cut", "edges": [[i, j, w] for i, j, w in self.edges]}


@dataclass(frozen=True, eq=False)
class Coverage(CubeFunction):
    """Weighted coverage: n sets over a weighted universe."""

    n: int
    universe_weights: np.ndarray
    sets: tuple  # sets[i] = tuple of universe elements covered by set i

    def __init__(self, n: int, universe_weights, sets):
        uw = np.asarray(universe_weights, dtype=np.float64).copy()
        if np.any(uw < 0):
            raise ValueError("universe weights must be non-negative")
        sets = tuple(tuple(sorted(int(u) for u in s)) for s in sets)
        if len(sets) != n:
            raise ValueError("need exactly n sets")
        for s in sets:
            for u in s:
                if not 0 <= u < uw.size:
                    raise ValueError(f"universe element {u} out of range")
        uw.setflags(write=False)
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "universe_weights", uw)
        object.__setattr__(self, "sets", sets)

    def _owner_masks(self) -> np.ndarray:
        """For each universe element u, the bitmask of sets containing u."""
        owners = np.zeros(self.universe_weights.size, dtype=np.int64)
        for i, s in enumerate(self.sets):
            for u in s:
                owners[u] |= 1 << i
        return owners

    def evaluate_masks(self, masks: np.ndarray) -> np.ndarray:
        masks = np.asarray(masks, dtype=np.int64)
        out = np.zeros(masks.shape, dtype=np.float64)
        for w, owner in zip(self.universe_weights, self._owner_masks()):
            if owner:
                out += w * ((masks & owner) != 0)
        return out

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "kind": "coverage",
            "universe_weights": [float(w) for w in self.universe_weights],
            "sets": [list(s) for s in self.sets],
        }


@dataclass(frozen=True, eq=False)
class BudgetAdditive(CubeFunction):
    """f(S) = min(sum of weights in S, budget)."""

    weights: np.ndarray
    budget: float

    def __init__(self, weights, budget: float):
        w = np.asarray(weights, dtype=np.float64).copy()
        if np.any(w < 0) or budget < 0:
            raise ValueError("weights and budget must be non-negative")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "budget", float(budget))

    @property
    def n(self) -> int:
        return int(self.weights.size)

    def evaluate_masks(self, masks: np.ndarray) -> np.ndarray:
        masks = np.asarray(masks, dtype=np.int64)
        out = np.zeros(masks.shape, dtype=np.float64)
        for i, w in enumerate(self.weights):
            out += w * ((masks >> i) & 1)
        return np.minimum(out, self.budget)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "kind": "budget_additive",
            "weights": [float(w) for w in self.weights],
            "budget": self.budget,
        }


@dataclass(frozen=True)
class UniformMatroidRank(CubeFunction):
    """f(S) = min(|S|, k)."""

    n: int
    k: int

    def __init__(self, n: int, k: int):
        if k < 0:
            raise ValueError("rank threshold must be non-negative")
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "k", int(k))

    def evaluate_masks(self, masks: np.ndarray) -> np.ndarray:
        masks = np.asarray(masks, dtype=np.uint64)
        return np.minimum(np.bitwise_count(masks).astype(np.float64), float(self.k))

    def to_dict(self) -> dict:
        return {"n": self.n, "kind": "uniform_matroid", "k": self.k}


# ---------------------------------------------------------------------------
# Structural checks
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Verdict:
    """Outcome of a structural check, with a witness when it fails."""

    ok: bool
    witness: Optional[tuple] = None
    violation: float = 0.0  # size of the worst violation found

    def __bool__(self) -> bool:
        return self.ok


def is_submodular_lattice(f: CubeFunction, tol: float = SUBMODULARITY_TOL) -> Verdict:
    """Exhaustive check of f(S|T) + f(S&T) <= f(S) + f(T) over all pairs.

    Returns a witness pair (S, T) on failure.
    """
    t = f.table()
    all_masks = np.arange(2**f.n, dtype=np.int64)
    worst = 0.0
    worst_pair = None
    for s in range(2**f.n):
        lhs = t[s | all_masks] + t[s & all_masks]
        rhs = t[s] + t[all_masks]
        gap = lhs - rhs
        i = int(np.argmax(gap))
        if gap[i] > worst:
            worst = float(gap[i])
            worst_pair = (s, i)
    if worst > tol:
        return Verdict(False, witness=worst_pair, violation=worst)
    return Verdict(True, violation=worst)


def is_submodular_marginal(f: CubeFunction, tol: float = SUBMODULARITY_TOL) -> Verdict:
    """Decreasing-marginal-returns check in its local form.

    Verifies f(S+i+j) - f(S+j) <= f(S+i) - f(S) for all S and distinct
    i, j not in S, which is equivalent to the quantified statement over
    all nested pairs S subset T.  Witness is (S, i, j).
    """
    t = f.table()
    all_masks = np.arange(2**f.n, dtype=np.int64)
    worst = 0.0
    worst_witness = None
    for i in range(f.n):
        for j in range(f.n):
            if i == j:
                continue
            base = all_masks[((all_masks >> i) & 1 == 0) & ((all_masks >> j) & 1 == 0)]
            gap = (t[base | (1 << i) | (1 << j)] - t[base | (1 << j)]) - (
                t[base | (1 << i)] - t[base]
            )
            k = int(np.argmax(gap))
            if gap[k] > worst:
                worst = float(gap[k])
                worst_witness = (int(base[k]), i, j)
    if worst > tol:
        return Verdict(False, witness=worst_witness, violation=worst)
    return Verdict(True, violation=worst)


def is_nonnegative(f: CubeFunction, tol: float = 0.0) -> Verdict:
    """f(S) >= 0 for every S; witness is the offending mask."""
    t = f.table()
    i = int(np.argmin(t))
    if t[i] < -tol:
        return Verdict(False, witness=(i,), violation=float(-t[i]))
    return Verdict(True)


# ---------------------------------------------------------------------------
# Random instances
# ---------------------------------------------------------------------------

FAMILIES = ("cut", "coverage", "budget_additive", "uniform_matroid")

RANDOM_TABLE_MAX_N = 4
RANDOM_TABLE_BUDGET = 10**6


def random_submodular(
    n: int,
    family: str,
    rng: np.random.Generator,
) -> CubeFunction:
    """Random member of a structured family (or a rejection-sampled table).

    family is one of 'cut', 'coverage', 'budget_additive', 'uniform_matroid',
    or 'random_table'.  Tables are only available for n <= 4: uniform [0,1]
    entries are rejection-sampled until they pass the submodularity and
    non-negativity checks, with a hard draw budget.
    """
    if n > MAX_DENSE_N:
        raise ValueError(f"n={n} too large")
    if family == "cut":
        if n < 2:
            raise ValueError("cut functions need n >= 2")
        edges = []
        for i in range(n):
            for j in range(i + 1, n):
                if rng.random() < 0.6:
                    edges.append((i, j, float(rng.uniform(0.1, 1.0))))
        if not edges:
            i, j = sorted(rng.choice(n, size=2, replace=False).tolist())
            edges.append((i, j, float(rng.uniform(0.1, 1.0))))
        return GraphCut(n, edges)
    if family == "coverage":
        m = max(2, 2 * n)
        uw = rng.uniform(0.1, 1.0, size=m)
        sets = []
        for _ in range(n):
            members = np.nonzero(rng.random(m) < 0.5)[0]
            sets.append(tuple(int(u) for u in members))
        return Coverage(n, uw, sets)
    if family == "budget_additive":
        w = rng.uniform(0.1, 1.0, size=n)
        budget = float(rng.uniform(0.25, 0.9) * w.sum())
        return BudgetAdditive(w, budget)
    if family == "uniform_matroid":
        return UniformMatroidRank(n, int(rng.integers(1, n + 1)))
    if family == "random_table":
        if n > RANDOM_TABLE_MAX_N:
            raise ValueError(
                f"random_table generation is limited to n <= {RANDOM_TABLE_MAX_N}"
            )
        for _ in range(RANDOM_TABLE_BUDGET):
            f = DenseTable(rng.uniform(0.0, 1.0, size=2**n))
            if is_submodular_lattice(f) and is_nonnegative(f):
                return f
        raise RuntimeError("rejection budget exhausted while sampling a table")
    raise ValueError(f"unknown family {family!r}")


# ---------------------------------------------------------------------------
# JSON function specs
# ---------------------------------------------------------------------------


def function_from_dict(d: dict) -> CubeFunction:
    """Build a CubeFunction from its JSON-spec dictionary."""
    kind = d.get("kind")
    n = int(d["n"])
    if kind == "dense":
        table = d["table"]
        if len(table) != 2**n:
            raise ValueError("dense table length must be 2^n")
        return DenseTable(table)
    if kind == "cut":
        return GraphCut(n, d["edges"])
    if kind == "coverage":
        return Coverage(n, d["universe_weights"], d["sets"])
    if kind == "budget_additive":
        return BudgetAdditive(d["weights"], d["budget"])
    if kind == "uniform_matroid":
        return UniformMatroidRank(n, d["k"])
    raise ValueError(f"unknown function kind {kind!r}")


def supermodular_square(n: int) -> DenseTable:
    """f(S) = |S|^2, the standard supermodular negative control."""
    return DenseTable(popcounts(n).astype(np.float64) ** 2)


def shifted(f: CubeFunction, offset: float) -> DenseTable:
    """f + offset as a dense table (submodularity is shift-invariant)."""
    return DenseTable(f.table() + offset)


__all__ = [
    "CubeFunction",
    "DenseTable",
    "GraphCut",
    "Coverage",
    "BudgetAdditive",
    "UniformMatroidRank",
    "Verdict",
    "is_submodular_lattice",
    "is_submodular_marginal",
    "is_nonnegative",
    "random_submodular",
    "function_from_dict",
    "supermodular_square",
    "shifted",
    "FAMILIES",
    "MAX_DENSE_N",
    "SUBMODULARITY_TOL",
    "bit_matrix",
]
