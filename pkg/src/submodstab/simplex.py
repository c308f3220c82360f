"""Dense tableau simplex for the small LPs arising from L1 polynomial fits.

Equality standard form only: minimize c.x subject to A x = b, x >= 0.
Deterministic throughout: the fast pricing mode enters the most negative
reduced cost and leaves by a Harris-style ratio test that prefers large
pivot elements; windows that stall on a degenerate plateau switch to
Bland's rule (lowest eligible indices), which cannot cycle.  A two-phase
start handles general instances; a caller who already knows a feasible
basis (the L1 fit does) can pass it and skip phase 1.

Rank-1 tableau updates accumulate roundoff and tolerance-skipped tiny
column entries can turn into real infeasibility after a long step, so the
tableau is rebuilt from the original data every few dozen pivots and
before any verdict is accepted; if a rebuild exposes negative basic
values, dual simplex pivots repair feasibility before the verdict counts.
The returned solution always comes from a freshly refactored tableau.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

PIVOT_TOL = 1e-9
SUSPECT_PIVOT = 1e-7
FEAS_TOL = 1e-8
HARRIS_TOL = 1e-8
REFACTOR_EVERY = 64
STALL_TOL = 1e-12

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"
# internal signal: refactor before committing to a numerically risky pivot
_REFRESH = "refresh"


@dataclass(frozen=True, eq=False)
class LPResult:
    status: str
    x: np.ndarray | None
    objective: float | None
    iterations: int
    basis: tuple[int, ...] | None

    def __bool__(self) -> bool:
        return self.status == OPTIMAL


def _pivot(T: np.ndarray, basis: np.ndarray, row: int, col: int) -> None:
    T[row] /= T[row, col]
    column = T[:, col].copy()
    column[row] = 0.0
    T -= np.outer(column, T[row])
    # kill accumulated roundoff in the pivot column
    T[:, col] = 0.0
    T[row, col] = 1.0
    basis[row] = col


def _leaving_row(
    T: np.ndarray, basis: np.ndarray, col: int, bland: bool
) -> int | None:
    """Ratio test on the entering column; None means unbounded.

    Basic values that have drifted slightly negative are treated as zero
    so their rows block immediately.  Bland mode takes the exact minimum
    ratio with the lowest basis index; fast mode relaxes the bound by a
    small feasibility tolerance and takes the largest pivot element among
    the rows that still qualify (the Harris two-pass rule).
    """
    m = T.shape[0] - 1
    colvals = T[:m, col]
    rows = np.flatnonzero(colvals > PIVOT_TOL)
    if rows.size == 0:
        return None
    rhs = np.maximum(T[rows, -1], 0.0)
    ratios = rhs / colvals[rows]
    if bland:
        best = ratios.min()
        tied = rows[ratios <= best + 1e-12]
        return int(tied[np.argmin(basis[tied])])
    bound = ((rhs + HARRIS_TOL) / colvals[rows]).min()
    window = ratios <= bound
    pivots = colvals[rows[window]]
    finalists = rows[window][pivots >= pivots.max() * (1.0 - 1e-9)]
    return int(finalists[np.argmin(basis[finalists])])


def _iterate(
    T: np.ndarray,
    basis: np.ndarray,
    enterable: np.ndarray,
    budget: int,
    bland: bool,
    fresh: bool,
) -> tuple[str | None, int]:
    """Pivot until a verdict, a risky pivot, or the budget runs out.

    Returns (status, pivots done) with status one of OPTIMAL, UNBOUNDED,
    _REFRESH (a tiny pivot element turned up on a stale tableau: it may be
    pure roundoff, so rebuild before trusting it), or None (budget spent).
    """
    for it in range(budget):
        costs = T[-1, :-1]
        eligible = np.flatnonzero(enterable & (costs < -PIVOT_TOL))
        if eligible.size == 0:
            return OPTIMAL, it
        if bland:
            col = int(eligible[0])
        else:
            col = int(eligible[np.argmin(costs[eligible])])
        row = _leaving_row(T, basis, col, bland)
        if row is None:
            return UNBOUNDED, it
        if T[row, col] < SUSPECT_PIVOT and (it > 0 or not fresh):
            return _REFRESH, it
        _pivot(T, basis, row, col)
    return None, budget


def _set_objective(T: np.ndarray, basis: np.ndarray, c: np.ndarray) -> None:
    """Write the reduced-cost row for cost vector c given the current basis."""
    T[-1, :] = 0.0
    T[-1, : c.size] = c
    cb = c[basis]
    live = np.flatnonzero(cb)
    if live.size:
        T[-1, :] -= cb[live] @ T[live, :]


def _refactor(
    T: np.ndarray, basis: np.ndarray, A: np.ndarray, b: np.ndarray, c: np.ndarray
) -> float:
    """Rebuild the tableau exactly from the original data and the basis.

    Returns the smallest basic value, so the caller can see whether the
    walk drifted outside the feasible region.
    """
    m = A.shape[0]
    try:
        fresh = np.linalg.solve(A[:, basis], np.column_stack([A, b]))
    except np.linalg.LinAlgError:
        raise RuntimeError("simplex basis became singular; internal error")
    T[:m, :] = fresh
    _set_objective(T, basis, c)
    return float(fresh[:, -1].min()) if m else 0.0


def _dual_repair(
    T: np.ndarray,
    basis: np.ndarray,
    enterable: np.ndarray,
    budget: int,
) -> int:
    """Dual simplex pivots until every basic value is >= -FEAS_TOL.

    Assumes reduced costs are >= -PIVOT_TOL (primal-optimal tableau that
    lost sign feasibility).  Returns pivots spent."""
    m = T.shape[0] - 1
    for it in range(budget):
        rhs = T[:m, -1]
        row = int(np.argmin(rhs))
        # aim past the acceptance tolerance so the exact rebuild clears it
        if rhs[row] >= -0.1 * FEAS_TOL:
            return it
        rowvals = T[row, :-1]
        cands = np.flatnonzero(enterable & (rowvals < -PIVOT_TOL))
        if cands.size == 0:
            raise RuntimeError("dual repair found no pivot; internal error")
        ratios = T[-1, cands] / -rowvals[cands]
        best = ratios.min()
        tied = cands[ratios <= best + 1e-12]
        col = int(tied[0])
        _pivot(T, basis, row, col)
    raise RuntimeError("dual repair exceeded its pivot budget; internal error")


def _run_phase(
    T: np.ndarray,
    basis: np.ndarray,
    enterable: np.ndarray,
    A: np.ndarray,
    b: np.ndarray,
    c: np.ndarray,
    max_iters: int,
    done: int,
) -> tuple[str, int]:
    """Iterate with periodic refactorization until a verdict survives a
    rebuild of the tableau, including sign feasibility of the basis (an
    optimal-looking basis that drifted negative gets dual simplex repair
    and the search resumes).  A budget window that fails to improve the
    objective flips the next window to Bland pricing, so degenerate
    plateaus cannot cycle; a window that improves flips back.  Returns
    (status, total pivots so far)."""
    fresh = True
    feasible = _refactor(T, basis, A, b, c) >= -FEAS_TOL
    bland = False
    repairs = 0
    while True:
        budget = min(REFACTOR_EVERY, max_iters - done)
        if budget <= 0:
            raise RuntimeError(f"simplex did not terminate within {max_iters} pivots")
        obj_before = -T[-1, -1]
        status, pivots = _iterate(T, basis, enterable, budget, bland, fresh)
        done += pivots
        if pivots > 0:
            fresh = False
            repairs = 0
        if status is not None and status != _REFRESH and fresh:
            if status == UNBOUNDED or feasible:
                return status, done
            # certificate is dual feasible but the basis drifted negative
            done += _dual_repair(T, basis, enterable, max_iters - done)
            repairs += 1
            if repairs > 8:
                raise RuntimeError("simplex could not restore feasibility; internal error")
        elif status is None:
            gain = obj_before - (-T[-1, -1])
            bland = not gain > STALL_TOL * max(1.0, abs(obj_before))
        worst = _refactor(T, basis, A, b, c)
        if worst < -1.0:
            raise RuntimeError("simplex lost primal feasibility; internal error")
        feasible = worst >= -FEAS_TOL
        fresh = True


def solve_lp(
    A: np.ndarray,
    b: np.ndarray,
    c: np.ndarray,
    initial_basis=None,
    max_iters: int = 500_000,
) -> LPResult:
    """Minimize c.x subject to A x = b, x >= 0.

    initial_basis, if given, must list one column per row forming a feasible
    basis; phase 1 is skipped.  Rows with negative b are sign-flipped first,
    so a supplied basis is interpreted against the flipped system.
    """
    A = np.asarray(A, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64).ravel().copy()
    c = np.asarray(c, dtype=np.float64).ravel()
    if A.ndim != 2:
        raise ValueError("A must be a matrix")
    m, ncols = A.shape
    if b.size != m or c.size != ncols:
        raise ValueError("inconsistent LP dimensions")

    A = A.copy()
    neg = b < 0
    A[neg] *= -1.0
    b[neg] *= -1.0

    done = 0

    if initial_basis is not None:
        basis = np.asarray(initial_basis, dtype=np.int64).copy()
        if basis.size != m:
            raise ValueError("initial basis must have one column per row")
        T = np.zeros((m + 1, ncols + 1))
        try:
            worst = _refactor(T, basis, A, b, c)
        except RuntimeError:
            raise ValueError("initial basis is singular")
        if worst < -FEAS_TOL:
            raise ValueError("initial basis is not feasible")
        enterable = np.ones(ncols, dtype=bool)
    else:
        # phase 1: artificial variable per row, drive their sum to zero
        A1 = np.hstack([A, np.eye(m)])
        basis = np.arange(ncols, ncols + m, dtype=np.int64)
        art_cost = np.zeros(ncols + m)
        art_cost[ncols:] = 1.0
        T = np.zeros((m + 1, ncols + m + 1))
        enterable = np.ones(ncols + m, dtype=bool)
        status, done = _run_phase(T, basis, enterable, A1, b, art_cost, max_iters, done)
        if status != OPTIMAL:
            raise RuntimeError("phase 1 cannot be unbounded")
        if -T[-1, -1] > FEAS_TOL:
            return LPResult(INFEASIBLE, None, None, done, None)
        # pivot lingering artificials out; a row with no real column is redundant
        keep = np.ones(m, dtype=bool)
        for i in range(m):
            if basis[i] < ncols:
                continue
            row = T[i, :ncols]
            candidates = np.flatnonzero(np.abs(row) > PIVOT_TOL)
            if candidates.size:
                _pivot(T, basis, i, int(candidates[0]))
                done += 1
            else:
                keep[i] = False
        if not keep.all():
            T = np.vstack([T[:m][keep], T[-1:]])
            basis = basis[keep]
            A = A[keep]
            b = b[keep]
            m = int(keep.sum())
        T = np.hstack([T[:, :ncols], T[:, -1:]])
        enterable = np.ones(ncols, dtype=bool)

    status, done = _run_phase(T, basis, enterable, A, b, c, max_iters, done)
    if status != OPTIMAL:
        return LPResult(UNBOUNDED, None, None, done, None)
    x = np.zeros(ncols)
    x[basis] = T[:m, -1]
    np.maximum(x, 0.0, out=x)
    return LPResult(OPTIMAL, x, float(c @ x), done, tuple(int(j) for j in basis))


def solve_inequality_lp(
    A_ub: np.ndarray,
    b_ub: np.ndarray,
    c: np.ndarray,
    max_iters: int = 500_000,
) -> LPResult:
    """Minimize c.x subject to A_ub x <= b_ub, x >= 0.

    Adds one slack per row.  When every b is non-negative the slack basis
    is used directly; otherwise phase 1 finds a starting vertex.  The
    returned x holds only the original variables.
    """
    A_ub = np.asarray(A_ub, dtype=np.float64)
    b_ub = np.asarray(b_ub, dtype=np.float64).ravel()
    c = np.asarray(c, dtype=np.float64).ravel()
    m, nvars = A_ub.shape
    A = np.hstack([A_ub, np.eye(m)])
    c_full = np.concatenate([c, np.zeros(m)])
    if m == 0 or b_ub.min() >= 0.0:
        basis = np.arange(nvars, nvars + m)
        res = solve_lp(A, b_ub, c_full, initial_basis=basis, max_iters=max_iters)
    else:
        res = solve_lp(A, b_ub, c_full, max_iters=max_iters)
    if res.status != OPTIMAL:
        return res
    return LPResult(
        res.status, res.x[:nvars], res.objective, res.iterations, res.basis
    )
