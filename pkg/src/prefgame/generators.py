"""Seeded preference generators and the fixed proof-game tables.

Random tournaments are reproducible bit-for-bit from their seed: the PCG64
generator seeded through numpy's SeedSequence is part of the public
contract, so fixtures stay stable across platforms.  The ``game_*``
builders produce the small structured games used to separate the mapping
conditions, and ``mixture_weights`` solves the 2x2 system that makes the
six-response game's two-cycle blend an exact equalizer.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    GenerationError,
    PayoffMatrix,
    Policy,
    PreferenceMatrix,
    ValidationError,
    make_payoff,
    make_policy,
    validate_preferences,
)
from .mappings import MappingSpec, eval_mapping
from .social_choice import condorcet_winner

REJECTION_CAP = 10_000


@dataclass(frozen=True)
class GeneratorConfig:
    """Parameters for one seeded random tournament draw.

    Winning preferences are drawn uniformly from
    [strength_low, strength_high], which must sit strictly inside
    (1/2, 1) so no draw ever ties or saturates.
    """

    n: int
    seed: int
    strength_low: float = 0.55
    strength_high: float = 0.95
    force_no_winner: bool = False

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValidationError(f"n must be positive, got {self.n}")
        if not 0.5 < self.strength_low <= self.strength_high < 1.0:
            raise ValidationError(
                f"need 1/2 < strength_low <= strength_high < 1, got "
                f"[{self.strength_low}, {self.strength_high}]"
            )


def random_tournament(cfg: GeneratorConfig) -> PreferenceMatrix:
    """Draw a strict random tournament, deterministic given the config.

    Each unordered pair gets a fair-coin winner and a uniform preference
    strength.  With ``force_no_winner`` the draw repeats (advancing the
    same stream) until no response beats all others; the attempt cap only
    bites for sizes where that is impossible or vanishingly rare.
    """
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(cfg.seed)))
    n = cfg.n
    for _ in range(REJECTION_CAP):
        p = np.full((n, n), 0.5)
        for i in range(n):
            for j in range(i + 1, n):
                strength = rng.uniform(cfg.strength_low, cfg.strength_high)
                if rng.random() < 0.5:
                    p[i, j] = strength
                    p[j, i] = 1.0 - strength
                else:
                    p[j, i] = strength
                    p[i, j] = 1.0 - strength
        pref = validate_preferences(p)
        if not cfg.force_no_winner or condorcet_winner(pref) is None:
            return pref
    raise GenerationError(
        f"no winner-free tournament of size {n} in {REJECTION_CAP} attempts"
    )


def _check_open_half(name: str, t: float) -> None:
    if not 0.5 < t <= 1.0:
        raise ValidationError(f"{name} must lie in (1/2, 1], got {t}")


def game_two(mapping: MappingSpec, t: float) -> PayoffMatrix:
    """Two responses, the first preferred with probability ``t``."""
    _check_open_half("t", t)
    mid = eval_mapping(mapping, 0.5)
    hi = eval_mapping(mapping, t)
    lo = eval_mapping(mapping, 1.0 - t)
    return make_payoff([[mid, hi], [lo, mid]])


def game_four(mapping: MappingSpec, t1: float, t2: float) -> PayoffMatrix:
    """A three-cycle at strength ``t1`` on top of one dominated response.

    Rows 0-2 beat each other cyclically; each beats row 3 with probability
    ``t2``.
    """
    _check_open_half("t1", t1)
    _check_open_half("t2", t2)
    mid = eval_mapping(mapping, 0.5)
    a1 = eval_mapping(mapping, t1)
    b1 = eval_mapping(mapping, 1.0 - t1)
    a2 = eval_mapping(mapping, t2)
    b2 = eval_mapping(mapping, 1.0 - t2)
    return make_payoff(
        [
            [mid, a1, b1, a2],
            [b1, mid, a1, a2],
            [a1, b1, mid, a2],
            [b2, b2, b2, mid],
        ]
    )


def game_six(mapping: MappingSpec, t1: float, t2: float) -> PayoffMatrix:
    """Two stacked three-cycles, the upper one beating the lower at ``t2``."""
    _check_open_half("t1", t1)
    _check_open_half("t2", t2)
    mid = eval_mapping(mapping, 0.5)
    a1 = eval_mapping(mapping, t1)
    b1 = eval_mapping(mapping, 1.0 - t1)
    a2 = eval_mapping(mapping, t2)
    b2 = eval_mapping(mapping, 1.0 - t2)
    cycle = np.array([[mid, a1, b1], [b1, mid, a1], [a1, b1, mid]])
    top = np.hstack([cycle, np.full((3, 3), a2)])
    bottom = np.hstack([np.full((3, 3), b2), cycle])
    return make_payoff(np.vstack([top, bottom]))


def mixture_weights(mapping: MappingSpec, t1: float, t2: float) -> tuple[Policy, Policy]:
    """Blend weights making both cycles of ``game_six`` exact equalizers.

    Solving mu1*(S - 3*f(t2)) = mu2*(S - 3*f(1-t2)) with mu1 + mu2 = 1,
    where S is the cycle sum f(1/2) + f(t1) + f(1-t1), spreads mu1 over the
    top cycle and mu2 over the bottom one; the primed policy swaps the two
    brackets.  A positive solution exists exactly when both brackets
    S - 3*f(t2) and S - 3*f(1-t2) are positive; the interesting use has
    cross values straddling the midpoint value, but only positivity is
    required.
    """
    _check_open_half("t1", t1)
    _check_open_half("t2", t2)
    mid = eval_mapping(mapping, 0.5)
    a1 = eval_mapping(mapping, t1)
    b1 = eval_mapping(mapping, 1.0 - t1)
    a2 = eval_mapping(mapping, t2)
    b2 = eval_mapping(mapping, 1.0 - t2)
    cycle_sum = mid + a1 + b1
    d_top = cycle_sum - 3.0 * a2
    d_bottom = cycle_sum - 3.0 * b2
    if not (d_top > 0.0 and d_bottom > 0.0):
        raise ValidationError(
            f"no positive blend: the cycle sum {cycle_sum} must exceed both "
            f"3*{a2} and 3*{b2}"
        )
    mu1 = d_bottom / (d_top + d_bottom)
    mu2 = d_top / (d_top + d_bottom)
    blend = make_policy([mu1 / 3.0] * 3 + [mu2 / 3.0] * 3)
    blend_primed = make_policy([mu2 / 3.0] * 3 + [mu1 / 3.0] * 3)
    return blend, blend_primed
