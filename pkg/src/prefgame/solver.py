"""Exact maximin solving for finite two-player zero-sum games.

The row player's problem max_pi min_j pi.A[:, j] becomes a linear program
by introducing the guaranteed value as an epigraph variable; the column
player's problem is the same program on the negated transpose.  Both are
solved independently and the report carries the (tiny) gap between the two
optimal values as a self-check.

``enumerate_equilibria`` is a deliberately brute-force oracle: it tries
every pair of supports, solves the equalization systems by least squares,
and keeps candidates whose best-response gap vanishes.  It exists to
cross-check the LP path in tests, not to be fast.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass

import numpy as np

from ._simplex import INFEASIBLE, OPTIMAL, solve_standard_lp
from .core import (
    DEFAULT_SUPPORT_THRESHOLD,
    PayoffMatrix,
    Policy,
    SolverError,
    ValidationError,
    _as_readonly,
    total_payoff,
)

logger = logging.getLogger(__name__)

DEFAULT_SOLVER_TOL = 1e-9
DEFAULT_VERIFY_TOL = 1e-8
DEDUP_TOL = 1e-7
# Slack used when carving out the optimal-strategy polytope.  It only needs
# to absorb float error in the reported value; anything looser inflates the
# coordinate ranges by the polytope's condition number and falsely reports
# non-uniqueness.
POLYTOPE_SLACK = 1e-11
DEFAULT_MAX_ENUM_N = 8


@dataclass(frozen=True)
class NashReport:
    """Solution of a zero-sum game from both sides.

    ``row_strategy`` attains ``value`` as a guaranteed minimum over columns;
    ``col_strategy`` caps the row player at ``value`` from above.
    ``duality_gap`` is the difference between the two independent solves.
    """

    row_strategy: Policy
    col_strategy: Policy
    value: float
    duality_gap: float
    solver_iterations: int

    def to_dict(self) -> dict:
        return {
            "row_strategy": self.row_strategy.w.tolist(),
            "col_strategy": self.col_strategy.w.tolist(),
            "value": self.value,
            "duality_gap": self.duality_gap,
        }


@dataclass(frozen=True)
class UniquenessReport:
    """Optimal-polytope geometry around a solved game.

    ``coordinate_ranges[i]`` is the [min, max] of the i-th strategy weight
    over all optimal row strategies; ``unique`` means every range has width
    at most the tolerance the report was computed with.
    """

    unique: bool
    column_slacks: np.ndarray
    dual_support_full: bool
    coordinate_ranges: np.ndarray

    def to_dict(self) -> dict:
        return {
            "unique": self.unique,
            "column_slacks": self.column_slacks.tolist(),
            "dual_support_full": self.dual_support_full,
            "coordinate_ranges": self.coordinate_ranges.tolist(),
        }


def _clean_policy(w: np.ndarray) -> Policy:
    w = np.clip(w, 0.0, None)
    total = w.sum()
    if total <= 0.0:
        raise SolverError("LP returned an empty strategy")
    return Policy(n=int(w.size), w=_as_readonly(w / total))


def _maximin_lp(a: np.ndarray) -> tuple[np.ndarray, float, int]:
    """Best guaranteed value for the row player of payoff array ``a``.

    Standard-form variables: strategy weights, the split epigraph value,
    and one surplus per column constraint.
    """
    n, m = a.shape
    nv = n + 2 + m
    a_eq = np.zeros((m + 1, nv))
    for j in range(m):
        a_eq[j, :n] = a[:, j]
        a_eq[j, n] = -1.0
        a_eq[j, n + 1] = 1.0
        a_eq[j, n + 2 + j] = -1.0
    a_eq[m, :n] = 1.0
    b_eq = np.zeros(m + 1)
    b_eq[m] = 1.0
    c = np.zeros(nv)
    c[n] = -1.0
    c[n + 1] = 1.0
    result = solve_standard_lp(c, a_eq, b_eq)
    if result.status != OPTIMAL:
        raise SolverError(f"maximin LP ended with status {result.status}")
    value = -result.objective + 0.0  # avoid reporting negative zero
    return result.x[:n], value, result.iterations


def solve_maximin(payoff: PayoffMatrix, tolerance: float = DEFAULT_SOLVER_TOL) -> NashReport:
    """Solve the zero-sum game with payoff matrix ``payoff``.

    Raises ``SolverError`` if the two sides' optimal values disagree by more
    than ``tolerance``, which would indicate an engine bug rather than a
    property of the input.
    """
    a = payoff.a
    row_w, row_value, iters_row = _maximin_lp(a)
    col_w, col_neg_value, iters_col = _maximin_lp(-a.T)
    minimax_value = -col_neg_value
    gap = abs(row_value - minimax_value)
    if gap > tolerance:
        raise SolverError(
            f"duality gap {gap} exceeds tolerance {tolerance}; the LP engine is inconsistent"
        )
    logger.debug(
        "maximin solved: n=%d value=%.12g gap=%.3g iterations=%d",
        payoff.n,
        row_value,
        gap,
        iters_row + iters_col,
    )
    return NashReport(
        row_strategy=_clean_policy(row_w),
        col_strategy=_clean_policy(col_w),
        value=float(row_value),
        duality_gap=float(gap),
        solver_iterations=iters_row + iters_col,
    )


def best_response_gap(payoff: PayoffMatrix, pi1: Policy, pi2: Policy) -> float:
    """How far the pair (pi1, pi2) is from mutual best response.

    Zero exactly at the game's equilibria; the sum of the row player's
    regret against ``pi2`` and the column player's regret against ``pi1``.
    """
    if pi1.n != payoff.n or pi2.n != payoff.n:
        raise ValidationError(
            f"dimension mismatch: payoff n={payoff.n}, policies n={pi1.n} and n={pi2.n}"
        )
    value = total_payoff(payoff, pi1, pi2)
    row_best = float(np.max(payoff.a @ pi2.w))
    col_best = float(np.min(pi1.w @ payoff.a))
    return (row_best - value) + (value - col_best)


def _support_system(a: np.ndarray, own: tuple[int, ...], other: tuple[int, ...], row_side: bool):
    # Equalization plus normalization: own weights make every index in
    # ``other`` yield the same payoff v.
    k = len(own)
    rows = len(other) + 1
    m = np.zeros((rows, k + 1))
    rhs = np.zeros(rows)
    for r, j in enumerate(other):
        m[r, :k] = a[list(own), j] if row_side else a[j, list(own)]
        m[r, k] = -1.0
    m[-1, :k] = 1.0
    rhs[-1] = 1.0
    sol, _, _, _ = np.linalg.lstsq(m, rhs, rcond=None)
    residual = float(np.max(np.abs(m @ sol - rhs)))
    return sol[:k], residual


def enumerate_equilibria(
    payoff: PayoffMatrix,
    max_n: int = DEFAULT_MAX_ENUM_N,
    tolerance: float = DEFAULT_VERIFY_TOL,
) -> list[tuple[Policy, Policy, float]]:
    """Brute-force all equilibria reachable through support enumeration.

    Tries every pair of row/column supports, including unequal sizes, which
    degenerate games need.  Candidates must solve their equalization systems
    consistently, be nonnegative, and pass the best-response gap test.
    Near-duplicate strategy pairs (within L-inf 1e-7) are merged.
    """
    n = payoff.n
    if n > max_n:
        raise ValidationError(f"support enumeration limited to n <= {max_n}, got n={n}")
    a = payoff.a
    indices = range(n)
    found: list[tuple[np.ndarray, np.ndarray, float]] = []
    supports = [
        tuple(comb) for size in range(1, n + 1) for comb in itertools.combinations(indices, size)
    ]
    for rows_support in supports:
        for cols_support in supports:
            x_part, res_x = _support_system(a, rows_support, cols_support, row_side=True)
            if res_x > 1e-9 or np.any(x_part < -1e-9):
                continue
            y_part, res_y = _support_system(a, cols_support, rows_support, row_side=False)
            if res_y > 1e-9 or np.any(y_part < -1e-9):
                continue
            x = np.zeros(n)
            x[list(rows_support)] = np.clip(x_part, 0.0, None)
            y = np.zeros(n)
            y[list(cols_support)] = np.clip(y_part, 0.0, None)
            if x.sum() <= 0.0 or y.sum() <= 0.0:
                continue
            x /= x.sum()
            y /= y.sum()
            gap = float(np.max(a @ y)) - float(np.min(x @ a))
            if abs(gap) > tolerance:
                continue
            if any(
                np.max(np.abs(x - fx)) <= DEDUP_TOL and np.max(np.abs(y - fy)) <= DEDUP_TOL
                for fx, fy, _ in found
            ):
                continue
            found.append((x, y, float(x @ a @ y)))
    return [
        (Policy(n=n, w=_as_readonly(x)), Policy(n=n, w=_as_readonly(y)), value)
        for x, y, value in found
    ]


def _coordinate_bound(a: np.ndarray, floor: float, index: int, maximize: bool) -> float:
    n = a.shape[0]
    nv = 2 * n
    a_eq = np.zeros((n + 1, nv))
    a_eq[:n, :n] = a.T
    a_eq[:n, n:] = -np.eye(n)
    a_eq[n, :n] = 1.0
    b_eq = np.concatenate([np.full(n, floor), [1.0]])
    c = np.zeros(nv)
    c[index] = -1.0 if maximize else 1.0
    result = solve_standard_lp(c, a_eq, b_eq)
    if result.status == INFEASIBLE:
        raise SolverError(
            "optimal-strategy polytope is empty; the report and payoff disagree"
        )
    if result.status != OPTIMAL:
        raise SolverError(f"coordinate-range LP ended with status {result.status}")
    bound = result.x[index]
    return float(bound)


def uniqueness_report(
    payoff: PayoffMatrix,
    nash: NashReport,
    tolerance: float = DEFAULT_VERIFY_TOL,
) -> UniquenessReport:
    """Measure the optimal-strategy polytope around a solved game.

    For each coordinate, two auxiliary LPs find its min and max over all
    strategies guaranteeing the game value.  ``unique`` holds when every
    coordinate is pinned to width at most ``tolerance``; the dual-support
    flag records whether every column weight of the opponent's strategy is
    active, the full-support condition tied to uniqueness.
    """
    a = payoff.a
    n = payoff.n
    w = nash.row_strategy.w
    column_slacks = w @ a - nash.value
    dual_support_full = bool(np.all(nash.col_strategy.w > DEFAULT_SUPPORT_THRESHOLD))
    floor = nash.value - POLYTOPE_SLACK
    ranges = np.zeros((n, 2))
    for i in range(n):
        ranges[i, 0] = _coordinate_bound(a, floor, i, maximize=False)
        ranges[i, 1] = _coordinate_bound(a, floor, i, maximize=True)
    widths = ranges[:, 1] - ranges[:, 0]
    unique = bool(np.all(widths <= tolerance))
    return UniquenessReport(
        unique=unique,
        column_slacks=_as_readonly(column_slacks),
        dual_support_full=dual_support_full,
        coordinate_ranges=_as_readonly(ranges),
    )
