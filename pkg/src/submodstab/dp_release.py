"""Private release of monotone-disjunction counting queries.

The disjunction answer map T -> CQ_D(c_T), viewed as a function on the
query-description cube {-1,1}^d under the uniform distribution, is close
to low degree; the release measures each low-degree coefficient with a
Laplace-noised statistical query and assembles the truncated polynomial.

Privacy is argued by accounting, not by output testing.  Every database
access during a release run must flow through laplace_sq; a raw read
inside an audited window is recorded and fails verification.  Coefficient
sensitivities use the replace-one adjacency convention (database size
public): the per-item coefficient of the empty set ranges over
[0, 1 - 2^-d] and a set S over an interval of width 2^-|S|, so replacing
one item moves the mean coefficient by at most width / n_db.
"""

from __future__ import annotations

import math
import threading
from contextlib import contextmanager
from dataclasses import dataclass

import numpy as np

from ._bits import format_subset, masks_up_to_degree
from .dist import ProductDistribution
from .lowdeg import TruncatedPolynomial

MAX_ATTRIBUTES = 16


@dataclass(frozen=True)
class AccessEvent:
    kind: str  # "mechanism" or "raw"
    label: str
    sensitivity: float
    scale: float


class AccessLog:
    """Append-only record of database touches, safe under concurrent runs."""

    def __init__(self):
        self._events: list[AccessEvent] = []
        self._lock = threading.Lock()

    def record(self, event: AccessEvent) -> None:
        with self._lock:
            self._events.append(event)

    def events(self) -> tuple[AccessEvent, ...]:
        with self._lock:
            return tuple(self._events)

    def __len__(self) -> int:
        with self._lock:
            return len(self._events)


class Database:
    """Multiset of attribute vectors in {0,1}^d, stored as bitmasks."""

    def __init__(self, items, d: int):
        if not 1 <= d <= MAX_ATTRIBUTES:
            raise ValueError(f"attribute count must be in [1, {MAX_ATTRIBUTES}]")
        items = np.asarray(items)
        if items.ndim == 2:
            if items.shape[1] != d:
                raise ValueError("item width does not match d")
            if not np.isin(items, (0, 1)).all():
                raise ValueError("items must be 0/1 vectors")
            masks = (items.astype(np.int64) << np.arange(d)).sum(axis=1)
        elif items.ndim == 1:
            masks = items.astype(np.int64)
            if masks.size and not (0 <= masks.min() and masks.max() < 2**d):
                raise ValueError("item mask out of range")
        else:
            raise ValueError("items must be a vector of masks or a 0/1 matrix")
        if masks.size < 1:
            raise ValueError("database must hold at least one item")
        masks.setflags(write=False)
        self._masks = masks
        self._d = d
        self._log: AccessLog | None = None

    @property
    def d(self) -> int:
        return self._d

    @property
    def n_db(self) -> int:
        return int(self._masks.size)

    @contextmanager
    def audited(self, log: AccessLog):
        """Attach an access log for the duration of a release run."""
        if self._log is not None and self._log is not log:
            raise RuntimeError("database is already attached to another log")
        previous = self._log
        self._log = log
        try:
            yield log
        finally:
            self._log = previous

    def _mechanism_masks(self) -> np.ndarray:
        """Item masks for laplace_sq only; the event is logged by the caller."""
        return self._masks

    def raw_masks(self, label: str = "raw read") -> np.ndarray:
        """Direct item access.  Inside an audited window this is a violation."""
        if self._log is not None:
            self._log.record(AccessEvent("raw", label, math.nan, 0.0))
        return self._masks


@dataclass(frozen=True)
class DisjunctionQuery:
    """Monotone disjunction over the attributes in the variable mask.

    Empty variable set means the always-false query.
    """

    d: int
    mask: int

    def __post_init__(self):
        if not 0 <= self.mask < 2**self.d:
            raise ValueError("variable mask out of range")

    @classmethod
    def from_indices(cls, d: int, indices) -> "DisjunctionQuery":
        mask = 0
        for i in indices:
            if not 0 <= i < d:
                raise ValueError("attribute index out of range")
            mask |= 1 << i
        return cls(d, mask)

    def evaluate_items(self, item_masks: np.ndarray) -> np.ndarray:
        return ((item_masks & self.mask) != 0).astype(np.float64)

    def __str__(self) -> str:
        return f"or{format_subset(self.mask)}"


def counting_query(db: Database, c: DisjunctionQuery) -> float:
    """Exact fraction of items satisfying the disjunction (a raw read)."""
    if c.d != db.d:
        raise ValueError("query and database attribute counts differ")
    return float(c.evaluate_items(db.raw_masks(f"counting_query {c}")).mean())


def laplace_sq(
    db: Database,
    g,
    scale: float,
    rng: np.random.Generator,
    sensitivity: float,
    label: str = "query",
) -> float:
    """(1/n_db) sum_r g(r) plus Laplace(scale) noise; the sealed access path.

    g maps the item-mask array to per-item values; sensitivity is the
    declared bound on how much the mean can move between adjacent
    databases, recorded for accounting.  scale = 0 means an exact answer
    (no draw is taken from rng).
    """
    if scale < 0 or sensitivity < 0:
        raise ValueError("scale and sensitivity must be non-negative")
    if db._log is not None:
        db._log.record(AccessEvent("mechanism", label, sensitivity, scale))
    answer = float(np.asarray(g(db._mechanism_masks()), dtype=np.float64).mean())
    if scale > 0:
        answer += float(rng.laplace(0.0, scale))
    return answer


def item_query_expansion(item_mask: int, d: int) -> np.ndarray:
    """Exact coefficients of T -> c_T(item) over the query cube.

    With k set attributes: empty-set coefficient 1 - 2^-k, coefficient
    (-1)^(|S|+1) 2^-k for nonempty S inside the item's support, 0 outside.
    """
    coeffs = np.zeros(2**d)
    k = int(item_mask).bit_count()
    coeffs[0] = 1.0 - 2.0**-k
    if k:
        masks = np.arange(2**d, dtype=np.int64)
        inside = masks[(masks & item_mask) == masks]
        sizes = np.bitwise_count(inside.astype(np.uint64)).astype(np.int64)
        signs = np.where(sizes % 2 == 1, 1.0, -1.0)
        coeffs[inside] = signs * 2.0**-k
        coeffs[0] = 1.0 - 2.0**-k
    return coeffs


def _coefficient_item_values(item_masks: np.ndarray, s: int) -> np.ndarray:
    """Per-item exact coefficient for subset mask s, vectorized over items."""
    pc = np.bitwise_count(item_masks.astype(np.uint64)).astype(np.int64)
    if s == 0:
        return 1.0 - np.power(2.0, -pc.astype(np.float64))
    size = int(s).bit_count()
    sign = 1.0 if size % 2 == 1 else -1.0
    inside = (item_masks & s) == s
    return np.where(inside, sign * np.power(2.0, -pc.astype(np.float64)), 0.0)


def coefficient_sensitivity(s: int, d: int, n_db: int) -> float:
    """Replace-one sensitivity of the mean coefficient for subset mask s."""
    if s == 0:
        return (1.0 - 2.0**-d) / n_db
    return 2.0 ** -int(s).bit_count() / n_db


def exact_answer_table(db: Database) -> np.ndarray:
    """CQ_D(c_T) for every variable mask T, by enumeration (a raw read)."""
    items = db.raw_masks("exact answer table")
    T = np.arange(2**db.d, dtype=np.int64)
    hits = (items[:, None] & T[None, :]) != 0
    return hits.mean(axis=0)


def release_degree(alpha: float) -> int:
    """ceil(log2(1/alpha)) + 1."""
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")
    return math.ceil(math.log2(1.0 / alpha)) + 1


@dataclass(frozen=True, eq=False)
class ReleaseStructure:
    """Released answer polynomial plus the run's public metadata."""

    poly: TruncatedPolynomial
    alpha: float
    eps: float
    degree: int
    queries: int
    log: AccessLog
    size_bound: float  # items needed by the q(log q + log(1/delta))/(eps tau) rule
    size_ok: bool

    def answer(self, c: DisjunctionQuery) -> float:
        return float(self.answer_table()[c.mask])

    def answer_table(self) -> np.ndarray:
        return self.poly.table()


def release(
    db: Database,
    alpha: float,
    eps: float,
    rng: np.random.Generator,
    log: AccessLog | None = None,
) -> ReleaseStructure:
    """Release all disjunction answers to accuracy alpha at privacy eps.

    One Laplace-noised statistical query per coefficient with |S| <=
    ceil(log2(1/alpha)) + 1; scale_S = q * sensitivity_S / eps so that
    simple composition spends exactly eps.  eps = inf gives exact
    coefficients.  The size_bound metadata reports (not enforces) the
    q(log q + log(1/delta)) / (eps * tau) adequacy rule at tau = alpha,
    delta = 0.1.
    """
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")
    if eps <= 0:
        raise ValueError("eps must be positive (inf allowed)")
    own_log = log if log is not None else AccessLog()
    d = db.d
    d_poly = min(release_degree(alpha), d)
    masks = masks_up_to_degree(d, d_poly)
    q = int(masks.size)

    coeffs = np.empty(q)
    with db.audited(own_log):
        for i, s in enumerate(masks):
            s = int(s)
            sens = coefficient_sensitivity(s, d, db.n_db)
            scale = 0.0 if math.isinf(eps) else q * sens / eps
            coeffs[i] = laplace_sq(
                db,
                lambda items, s=s: _coefficient_item_values(items, s),
                scale,
                rng,
                sensitivity=sens,
                label=f"coeff {format_subset(s)}",
            )

    if math.isinf(eps):
        size_bound = 0.0
    else:
        size_bound = q * (math.log(q) + math.log(1.0 / 0.1)) / (eps * alpha)
    poly = TruncatedPolynomial(
        ProductDistribution.uniform(d), d_poly, masks, coeffs
    )
    return ReleaseStructure(
        poly=poly,
        alpha=alpha,
        eps=eps,
        degree=d_poly,
        queries=q,
        log=own_log,
        size_bound=size_bound,
        size_ok=bool(db.n_db >= size_bound),
    )


@dataclass(frozen=True)
class AccountingReport:
    ok: bool
    eps_declared: float
    eps_spent: float
    mechanism_accesses: int
    raw_reads: int

    def __bool__(self) -> bool:
        return self.ok


def verify_privacy_accounting(log: AccessLog, eps: float) -> AccountingReport:
    """Check the run log: no raw reads, and total spend within eps.

    Spend is the simple-composition sum of sensitivity / scale over all
    mechanism accesses; an exact answer (scale 0) to a query with positive
    sensitivity costs infinite budget.
    """
    spent = 0.0
    mech = 0
    raw = 0
    for ev in log.events():
        if ev.kind == "raw":
            raw += 1
            continue
        mech += 1
        if ev.sensitivity == 0:
            continue
        if ev.scale > 0:
            spent += ev.sensitivity / ev.scale
        else:
            spent = math.inf
    ok = raw == 0 and spent <= eps * (1 + 1e-12)
    return AccountingReport(ok, eps, spent, mech, raw)


def evaluate_release(
    structure: ReleaseStructure, db: Database, alpha: float | None = None
) -> float:
    """Exact beta: the fraction of queries answered worse than alpha."""
    if alpha is None:
        alpha = structure.alpha
    truth = exact_answer_table(db)
    approx = structure.answer_table()
    return float((np.abs(truth - approx) > alpha).mean())
