"""Core data types for pairwise preference games.

A preference matrix holds pairwise win probabilities between n responses.
Applying a scalar payoff mapping entrywise turns it into the payoff matrix
of a two-player zero-sum game, and policies (probability vectors over the
responses) are the strategies of that game.

All types are immutable after construction: the wrapped arrays are marked
read-only, so instances can be shared freely across threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

if TYPE_CHECKING:
    from .mappings import MappingSpec

DEFAULT_VALIDATION_TOL = 1e-9
DEFAULT_TIE_TOL = 1e-9
DEFAULT_SUPPORT_THRESHOLD = 1e-7


class PrefGameError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(PrefGameError, ValueError):
    """Input data violates a structural requirement."""


class MappingError(PrefGameError, ValueError):
    """A payoff mapping could not be built or evaluated."""


class SolverError(PrefGameError, RuntimeError):
    """The LP machinery failed in a way that indicates a bug or bad input."""


class TieError(PrefGameError):
    """An operation that requires strict pairwise preferences saw a tie."""


class GenerationError(PrefGameError, RuntimeError):
    """A random generator could not satisfy its constraints."""


def _as_readonly(arr: np.ndarray) -> np.ndarray:
    out = np.array(arr, dtype=float)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class PreferenceMatrix:
    """Pairwise preference probabilities between ``n`` responses.

    ``p[i, j]`` is the probability that response ``i`` is preferred to
    response ``j``.  Entries satisfy ``p[i, j] + p[j, i] = 1`` and the
    diagonal is 1/2.  ``no_tie`` records whether every off-diagonal entry
    is bounded away from 1/2, which downstream decomposition requires.
    """

    n: int
    p: np.ndarray
    no_tie: bool

    def to_dict(self) -> dict:
        return {"n": self.n, "p": self.p.tolist()}


@dataclass(frozen=True)
class PayoffMatrix:
    """Real payoff ``a[i, j]`` earned by the row player against the column player."""

    n: int
    a: np.ndarray

    def to_dict(self) -> dict:
        return {"n": self.n, "a": self.a.tolist()}


@dataclass(frozen=True)
class Policy:
    """A probability vector over ``n`` responses."""

    n: int
    w: np.ndarray

    def support(self, threshold: float = DEFAULT_SUPPORT_THRESHOLD) -> list[int]:
        """Indices carrying more than ``threshold`` mass."""
        return [int(i) for i in np.flatnonzero(self.w > threshold)]

    def to_dict(self) -> dict:
        return {"n": self.n, "w": self.w.tolist()}

    @staticmethod
    def delta(i: int, n: int) -> "Policy":
        """The pure policy concentrated on response ``i``."""
        if not 0 <= i < n:
            raise ValidationError(f"index {i} out of range for n={n}")
        w = np.zeros(n)
        w[i] = 1.0
        return Policy(n=n, w=_as_readonly(w))

    @staticmethod
    def uniform(n: int) -> "Policy":
        """The uniform policy over ``n`` responses."""
        if n < 1:
            raise ValidationError("n must be positive")
        return Policy(n=n, w=_as_readonly(np.full(n, 1.0 / n)))


def _require_square(raw: np.ndarray, what: str) -> int:
    if raw.ndim != 2 or raw.shape[0] != raw.shape[1]:
        raise ValidationError(f"{what} must be a square matrix, got shape {raw.shape}")
    if raw.shape[0] < 1:
        raise ValidationError(f"{what} must have at least one row")
    return int(raw.shape[0])


def validate_preferences(
    raw,
    tie_tolerance: float = DEFAULT_TIE_TOL,
    validation_tolerance: float = DEFAULT_VALIDATION_TOL,
) -> PreferenceMatrix:
    """Check a raw matrix of pairwise probabilities and wrap it.

    Parameters
    ----------
    raw:
        Square array-like with entries in [0, 1].
    tie_tolerance:
        Off-diagonal entries within this distance of 1/2 count as ties;
        they do not abort validation but clear the ``no_tie`` flag.
    validation_tolerance:
        Absolute slack allowed on the complement identity
        ``p[i, j] + p[j, i] = 1`` and on the diagonal value 1/2.

    Entries within tolerance are accepted as-is, never re-normalized, so
    the stored matrix is exactly the caller's data.

    Raises
    ------
    ValidationError
        If the matrix is not square, has entries outside [0, 1], violates
        the complement identity, or has a diagonal entry away from 1/2.
    """
    p = np.asarray(raw, dtype=float)
    n = _require_square(p, "preference matrix")
    if not np.all(np.isfinite(p)):
        raise ValidationError("preference entries must be finite")
    if np.any(p < 0.0) or np.any(p > 1.0):
        bad = np.argwhere((p < 0.0) | (p > 1.0))[0]
        raise ValidationError(
            f"entry p[{bad[0]}][{bad[1]}] = {p[bad[0], bad[1]]} outside [0, 1]"
        )
    comp = np.abs(p + p.T - 1.0)
    if np.any(comp > validation_tolerance):
        bad = np.argwhere(comp > validation_tolerance)[0]
        i, j = int(bad[0]), int(bad[1])
        raise ValidationError(
            f"complement violation at ({i}, {j}): "
            f"p[{i}][{j}] + p[{j}][{i}] = {p[i, j] + p[j, i]}"
        )
    diag = np.abs(np.diagonal(p) - 0.5)
    if np.any(diag > validation_tolerance):
        i = int(np.argmax(diag))
        raise ValidationError(f"diagonal entry p[{i}][{i}] = {p[i, i]} must be 1/2")
    off = ~np.eye(n, dtype=bool)
    no_tie = bool(np.all(np.abs(p[off] - 0.5) >= tie_tolerance)) if n > 1 else True
    return PreferenceMatrix(n=n, p=_as_readonly(p), no_tie=no_tie)


def make_payoff(raw) -> PayoffMatrix:
    """Wrap a square array of finite reals as a payoff matrix."""
    a = np.asarray(raw, dtype=float)
    n = _require_square(a, "payoff matrix")
    if not np.all(np.isfinite(a)):
        raise ValidationError("payoff entries must be finite")
    return PayoffMatrix(n=n, a=_as_readonly(a))


def make_policy(raw, tolerance: float = DEFAULT_VALIDATION_TOL) -> Policy:
    """Wrap a nonnegative vector summing to one as a policy.

    Small negative entries (at most ``tolerance`` in magnitude) are snapped
    to zero; the total mass must already be 1 within ``tolerance``.
    """
    w = np.asarray(raw, dtype=float)
    if w.ndim != 1 or w.size < 1:
        raise ValidationError(f"policy must be a nonempty vector, got shape {w.shape}")
    if not np.all(np.isfinite(w)):
        raise ValidationError("policy entries must be finite")
    if np.any(w < -tolerance):
        i = int(np.argmin(w))
        raise ValidationError(f"policy entry w[{i}] = {w[i]} is negative")
    total = float(w.sum())
    if abs(total - 1.0) > tolerance:
        raise ValidationError(f"policy mass {total} is not 1")
    w = np.clip(w, 0.0, None)
    if not np.any(w > 0.0):
        raise ValidationError("policy support is empty")
    return Policy(n=int(w.size), w=_as_readonly(w))


def apply_mapping(pref: PreferenceMatrix, mapping: "MappingSpec") -> PayoffMatrix:
    """Apply a scalar payoff mapping entrywise to a preference matrix.

    The diagonal of the result is the mapping's value at exactly 1/2, even
    when stored diagonal entries carry float noise within the validation
    tolerance; the diagonal anchors every downstream symmetry argument.
    """
    from .mappings import eval_mapping_array, eval_mapping

    a = eval_mapping_array(mapping, pref.p)
    mid = eval_mapping(mapping, 0.5)
    np.fill_diagonal(a, mid)
    if not np.all(np.isfinite(a)):
        bad = np.argwhere(~np.isfinite(a))[0]
        i, j = int(bad[0]), int(bad[1])
        raise MappingError(
            f"mapping produced non-finite payoff at ({i}, {j}) "
            f"from preference {pref.p[i, j]}"
        )
    return PayoffMatrix(n=pref.n, a=_as_readonly(a))


def total_payoff(payoff: PayoffMatrix, pi1: Policy, pi2: Policy) -> float:
    """Expected payoff of ``pi1`` against ``pi2``: the bilinear form w1' A w2."""
    if pi1.n != payoff.n or pi2.n != payoff.n:
        raise ValidationError(
            f"dimension mismatch: payoff n={payoff.n}, "
            f"policies n={pi1.n} and n={pi2.n}"
        )
    return float(pi1.w @ payoff.a @ pi2.w)
