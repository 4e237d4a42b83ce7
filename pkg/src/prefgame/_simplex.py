"""Dense two-phase simplex for small standard-form linear programs.

Solves min c.x subject to A x = b, x >= 0.  Phase 1 minimizes the mass of
artificial variables to find a basic feasible point; phase 2 optimizes the
real objective.  Pivots follow Bland's rule (smallest eligible index both
entering and leaving), which rules out cycling, so the iteration cap is a
backstop against bugs rather than a tuning knob.

Problem sizes here are tiny (tens of variables), so everything is dense
and no effort goes into factorization reuse.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import SolverError

PIVOT_TOL = 1e-10
RATIO_TIE_TOL = 1e-12
DEFAULT_FEAS_TOL = 1e-9
MAX_ITER = 100_000

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass
class LPResult:
    status: str
    x: np.ndarray
    objective: float
    iterations: int


def _pivot(tableau: np.ndarray, red: np.ndarray, basis: np.ndarray, row: int, col: int) -> None:
    tableau[row] /= tableau[row, col]
    factors = tableau[:, col].copy()
    factors[row] = 0.0
    tableau -= np.outer(factors, tableau[row])
    red -= red[col] * tableau[row]
    basis[row] = col


def _iterate(
    tableau: np.ndarray,
    red: np.ndarray,
    basis: np.ndarray,
    n_enterable: int,
    iterations: int,
) -> tuple[int, str]:
    while True:
        negative = np.flatnonzero(red[:n_enterable] < -PIVOT_TOL)
        if negative.size == 0:
            return iterations, OPTIMAL
        col = int(negative[0])
        column = tableau[:, col]
        rows = np.flatnonzero(column > PIVOT_TOL)
        if rows.size == 0:
            return iterations, UNBOUNDED
        ratios = tableau[rows, -1] / column[rows]
        best = float(ratios.min())
        ties = rows[ratios <= best + RATIO_TIE_TOL * max(1.0, abs(best))]
        row = int(ties[np.argmin(basis[ties])])
        _pivot(tableau, red, basis, row, col)
        iterations += 1
        if iterations > MAX_ITER:
            raise SolverError("simplex iteration cap exceeded; anti-cycling pivoting should prevent this")


def solve_standard_lp(
    c,
    a_eq,
    b_eq,
    feas_tol: float = DEFAULT_FEAS_TOL,
) -> LPResult:
    """Solve min c.x with A x = b, x >= 0.

    Returns an ``LPResult`` whose status is ``optimal``, ``infeasible``
    (phase-1 artificial mass above ``feas_tol``) or ``unbounded``.  On
    non-optimal statuses ``x`` and ``objective`` are not meaningful.
    """
    c = np.asarray(c, dtype=float)
    a = np.array(a_eq, dtype=float)
    b = np.array(b_eq, dtype=float)
    if a.ndim != 2 or b.ndim != 1 or c.ndim != 1:
        raise SolverError("LP inputs must be (vector, matrix, vector)")
    m, n = a.shape
    if b.shape[0] != m or c.shape[0] != n:
        raise SolverError(f"LP shape mismatch: A is {a.shape}, b is {b.shape}, c is {c.shape}")

    flip = b < 0.0
    a[flip] *= -1.0
    b[flip] *= -1.0

    tableau = np.hstack([a, np.eye(m), b[:, None]])
    basis = np.arange(n, n + m)

    # Phase 1 reduced costs for artificial-sum objective: the basis is all
    # artificials, each with cost one.
    red = np.concatenate([-tableau[:, : n + m].sum(axis=0), [-b.sum()]])
    red[n : n + m] += 1.0
    iterations, status = _iterate(tableau, red, basis, n + m, 0)
    if status != OPTIMAL:
        raise SolverError("phase-1 subproblem cannot be unbounded")
    artificial_mass = -red[-1]
    if artificial_mass > feas_tol:
        return LPResult(status=INFEASIBLE, x=np.zeros(n), objective=float("nan"), iterations=iterations)

    # Drive leftover artificials out of the basis; a row with no usable real
    # column is redundant and gets dropped.
    keep = np.ones(m, dtype=bool)
    in_basis = set(int(v) for v in basis)
    for i in range(m):
        if basis[i] < n:
            continue
        candidates = [j for j in range(n) if j not in in_basis and abs(tableau[i, j]) > PIVOT_TOL]
        if candidates:
            j = candidates[0]
            in_basis.discard(int(basis[i]))
            in_basis.add(j)
            _pivot(tableau, red, basis, i, j)
        else:
            keep[i] = False
    if not np.all(keep):
        tableau = tableau[keep]
        basis = basis[keep]

    tableau = np.hstack([tableau[:, :n], tableau[:, -1:]])
    cost_basis = c[basis]
    red = np.concatenate([c - cost_basis @ tableau[:, :n], [-(cost_basis @ tableau[:, -1])]])
    iterations, status = _iterate(tableau, red, basis, n, iterations)
    if status == UNBOUNDED:
        return LPResult(status=UNBOUNDED, x=np.zeros(n), objective=float("nan"), iterations=iterations)

    x = np.zeros(n)
    x[basis] = tableau[:, -1]
    return LPResult(status=OPTIMAL, x=x, objective=float(c @ x), iterations=iterations)
