"""Scalar payoff mappings on [0, 1] and their consistency conditions.

A mapping turns a pairwise preference probability into a game payoff.  The
shape of the mapping around the midpoint 1/2 decides which social-choice
guarantees the induced game keeps; ``check_conditions`` tests the three
relevant shape conditions on a dense grid:

1. above-midpoint values at or above the midpoint value, below-midpoint
   values strictly under it (winner consistency);
2. additionally ``f(t) + f(1-t)`` at least twice the midpoint value
   (forces mixed solutions when no winner exists);
3. ``f(t) + f(1-t)`` exactly twice the midpoint value, plus the strict
   below-midpoint part (top-group consistency).

Verdicts are grid verdicts by contract: strictness is certified only up to
a configurable margin and only at sampled points.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import MappingError

DEFAULT_GRID_RESOLUTION = 10_001
DEFAULT_MARGIN = 1e-12
LOG_ODDS_CLAMP = 1e-9

_KINDS = (
    "identity",
    "log_odds",
    "affine",
    "power",
    "piecewise_linear",
    "piecewise_constant",
    "symmetric_extension",
)


@dataclass(frozen=True)
class MappingSpec:
    """Immutable description of a scalar mapping on [0, 1].

    Only the fields relevant to ``kind`` are meaningful; use the factory
    functions in this module rather than the constructor.  ``clamp_epsilon``
    pulls every argument into ``[clamp_epsilon, 1 - clamp_epsilon]`` before
    evaluation, which keeps log-odds finite on data that touches 0 or 1.
    """

    kind: str
    clamp_epsilon: float = 0.0
    a: float = 1.0
    b: float = 0.0
    k: float = 1.0
    m_minus: float = 0.0
    mid: float = 0.0
    m_plus: float = 0.0
    points: tuple[tuple[float, float], ...] = field(default=())
    base: "MappingSpec | None" = None

    def describe(self) -> dict:
        return mapping_to_dict(self)


@dataclass(frozen=True)
class ConditionReport:
    """Grid verdicts for the three mapping shape conditions.

    ``witnesses`` holds one ``(t, reason)`` pair for each failed condition,
    pointing at the worst sampled violation.  ``jump_below``/``jump_above``
    estimate the one-sided gaps ``|f(1/2 ± h) - f(1/2)|`` at the finest grid
    step ``h``; a grid cannot distinguish continuity at the midpoint from a
    jump, so the estimates are reported and interpretation is the caller's.
    """

    condorcet_ok: bool
    mixed_ok: bool
    smith_ok: bool
    witnesses: tuple[tuple[float, str], ...]
    grid_resolution: int
    margin: float
    jump_below: float
    jump_above: float

    def to_dict(self) -> dict:
        return {
            "condorcet_ok": self.condorcet_ok,
            "mixed_ok": self.mixed_ok,
            "smith_ok": self.smith_ok,
            "witnesses": [[t, reason] for t, reason in self.witnesses],
            "grid_resolution": self.grid_resolution,
            "margin": self.margin,
            "jump_below": self.jump_below,
            "jump_above": self.jump_above,
        }


def identity() -> MappingSpec:
    """The mapping f(t) = t."""
    return MappingSpec(kind="identity")


def log_odds(clamp_epsilon: float = LOG_ODDS_CLAMP) -> MappingSpec:
    """The mapping f(t) = log(t / (1 - t)), clamped away from 0 and 1."""
    _check_clamp(clamp_epsilon)
    return MappingSpec(kind="log_odds", clamp_epsilon=clamp_epsilon)


def affine(a: float, b: float, clamp_epsilon: float = 0.0) -> MappingSpec:
    """The mapping f(t) = a*t + b."""
    _check_clamp(clamp_epsilon)
    if not (np.isfinite(a) and np.isfinite(b)):
        raise MappingError("affine coefficients must be finite")
    return MappingSpec(kind="affine", a=float(a), b=float(b), clamp_epsilon=clamp_epsilon)


def power(k: float, clamp_epsilon: float = 0.0) -> MappingSpec:
    """The mapping f(t) = t**k.

    Negative exponents blow up at t = 0; set a positive ``clamp_epsilon``
    when the input may touch the boundary.
    """
    _check_clamp(clamp_epsilon)
    if not np.isfinite(k):
        raise MappingError("power exponent must be finite")
    return MappingSpec(kind="power", k=float(k), clamp_epsilon=clamp_epsilon)


def piecewise_linear(points, clamp_epsilon: float = 0.0) -> MappingSpec:
    """Linear interpolation through ``points``, a list of (t, value) pairs.

    Breakpoints must be strictly ascending in t and start at t = 0.  The
    last breakpoint is normally t = 1; a shorter table reaching at least
    t = 1/2 is accepted so it can serve as a half-interval base for
    ``symmetric_extension``, and evaluation past the last breakpoint holds
    the final value.
    """
    _check_clamp(clamp_epsilon)
    pts = tuple((float(t), float(v)) for t, v in points)
    if len(pts) < 2:
        raise MappingError("piecewise_linear needs at least two points")
    ts = np.array([t for t, _ in pts])
    vs = np.array([v for _, v in pts])
    if not (np.all(np.isfinite(ts)) and np.all(np.isfinite(vs))):
        raise MappingError("piecewise_linear points must be finite")
    if np.any(np.diff(ts) <= 0):
        raise MappingError("piecewise_linear breakpoints must be strictly ascending")
    if ts[0] != 0.0:
        raise MappingError("piecewise_linear must start at t=0")
    if ts[-1] < 0.5:
        raise MappingError("piecewise_linear must cover t=1/2")
    return MappingSpec(kind="piecewise_linear", points=pts, clamp_epsilon=clamp_epsilon)


def piecewise_constant(m_minus: float, mid: float, m_plus: float) -> MappingSpec:
    """Three-level step mapping: ``m_minus`` below 1/2, ``mid`` at exactly 1/2,
    ``m_plus`` above."""
    vals = (m_minus, mid, m_plus)
    if not all(np.isfinite(v) for v in vals):
        raise MappingError("piecewise_constant levels must be finite")
    return MappingSpec(
        kind="piecewise_constant",
        m_minus=float(m_minus),
        mid=float(mid),
        m_plus=float(m_plus),
    )


def symmetric_extension(base: MappingSpec, check_resolution: int = 2001) -> MappingSpec:
    """Extend a mapping given on [0, 1/2] to all of [0, 1] by point symmetry.

    The result equals ``base`` on [0, 1/2] and ``2*base(1/2) - base(1-t)``
    above, so ``f(t) + f(1-t) = 2*f(1/2)`` holds by construction.  The base
    must sit strictly below its midpoint value on [0, 1/2); this is checked
    on a grid of ``check_resolution`` points and violations are rejected.
    """
    if check_resolution < 3:
        raise MappingError("check_resolution must be at least 3")
    ts = np.linspace(0.0, 0.5, check_resolution)
    vals = eval_mapping_array(base, ts)
    if not np.all(np.isfinite(vals)):
        raise MappingError("base mapping is not finite on [0, 1/2]")
    mid = vals[-1]
    bad = vals[:-1] >= mid
    if np.any(bad):
        t_bad = float(ts[:-1][bad][0])
        raise MappingError(
            f"base mapping must stay strictly below its midpoint value: "
            f"base({t_bad}) = {float(eval_mapping(base, t_bad))} >= base(0.5) = {float(mid)}"
        )
    return MappingSpec(kind="symmetric_extension", base=base)


def _check_clamp(clamp_epsilon: float) -> None:
    if not (0.0 <= clamp_epsilon < 0.5):
        raise MappingError(f"clamp_epsilon must be in [0, 0.5), got {clamp_epsilon}")


def eval_mapping_array(spec: MappingSpec, t) -> np.ndarray:
    """Evaluate ``spec`` elementwise on an array of probabilities.

    Inputs are clamped into ``[clamp_epsilon, 1 - clamp_epsilon]`` first.
    Non-finite outputs are returned as-is; callers that require finiteness
    check the result (scalar evaluation raises instead).
    """
    raw = np.asarray(t, dtype=float)
    if np.any(raw < -1e-12) or np.any(raw > 1.0 + 1e-12):
        raise MappingError("mapping argument outside [0, 1]")
    ts = np.clip(raw, 0.0, 1.0)
    kind = spec.kind
    if kind == "log_odds":
        # Clamp numerator and complement separately: mirrored arguments t and
        # 1-t then produce exactly opposite values, which the symmetry
        # condition needs at margins far below the 1/eps rounding blow-up.
        eps = spec.clamp_epsilon
        num = np.maximum(ts, eps)
        den = np.maximum(1.0 - ts, eps)
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.log(num) - np.log(den)
    if spec.clamp_epsilon > 0.0:
        ts = np.clip(ts, spec.clamp_epsilon, 1.0 - spec.clamp_epsilon)
    if kind == "identity":
        return ts.copy()
    if kind == "affine":
        return spec.a * ts + spec.b
    if kind == "power":
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.power(ts, spec.k)
    if kind == "piecewise_linear":
        xs = np.array([p[0] for p in spec.points])
        vs = np.array([p[1] for p in spec.points])
        return np.interp(ts, xs, vs)
    if kind == "piecewise_constant":
        return np.where(ts < 0.5, spec.m_minus, np.where(ts > 0.5, spec.m_plus, spec.mid))
    if kind == "symmetric_extension":
        assert spec.base is not None
        lower = eval_mapping_array(spec.base, np.minimum(ts, 0.5))
        upper = 2.0 * eval_mapping_array(spec.base, 0.5) - eval_mapping_array(
            spec.base, np.minimum(1.0 - ts, 0.5)
        )
        return np.where(ts <= 0.5, lower, upper)
    raise MappingError(f"unknown mapping kind {kind!r}")


def eval_mapping(spec: MappingSpec, t: float) -> float:
    """Evaluate ``spec`` at a single probability; raises on non-finite output."""
    out = float(eval_mapping_array(spec, np.asarray(t, dtype=float)))
    if not np.isfinite(out):
        raise MappingError(f"mapping {spec.kind} is not finite at t={t}")
    return out


def _grid(resolution: int) -> np.ndarray:
    # The midpoint anchors all three conditions, so force its exact presence.
    ts = np.linspace(0.0, 1.0, resolution)
    return np.unique(np.concatenate([ts, [0.5]]))


def check_conditions(
    spec: MappingSpec,
    grid_resolution: int = DEFAULT_GRID_RESOLUTION,
    margin: float = DEFAULT_MARGIN,
) -> ConditionReport:
    """Test the three midpoint shape conditions on a uniform grid.

    Strict inequalities are certified with slack ``margin``; non-strict ones
    are allowed to miss by ``margin`` to absorb float rounding.  Each failed
    condition contributes its worst sampled violation to ``witnesses``.
    """
    if grid_resolution < 3:
        raise MappingError("grid_resolution must be at least 3")
    if margin <= 0.0:
        raise MappingError("margin must be positive")
    ts = _grid(grid_resolution)
    vals = eval_mapping_array(spec, ts)
    mirrored = eval_mapping_array(spec, 1.0 - ts)
    if not (np.all(np.isfinite(vals)) and np.all(np.isfinite(mirrored))):
        raise MappingError(f"mapping {spec.kind} is not finite on the grid")
    mid = eval_mapping(spec, 0.5)

    below = ts < 0.5
    at_or_above = ~below
    witnesses: list[tuple[float, str]] = []

    upper_gap = vals[at_or_above] - mid
    upper_ok = bool(np.all(upper_gap >= -margin))
    lower_gap = (mid - margin) - vals[below]
    lower_ok = bool(np.all(lower_gap > 0.0)) if np.any(below) else True
    condorcet_ok = upper_ok and lower_ok
    if not upper_ok:
        i = int(np.argmin(upper_gap))
        t_bad = float(ts[at_or_above][i])
        witnesses.append(
            (t_bad, f"value {vals[at_or_above][i]:.6g} drops below the midpoint value {mid:.6g}")
        )
    if not lower_ok:
        i = int(np.argmin(lower_gap))
        t_bad = float(ts[below][i])
        witnesses.append(
            (t_bad, f"value {vals[below][i]:.6g} is not strictly below the midpoint value {mid:.6g}")
        )

    sym = vals + mirrored - 2.0 * mid
    sym_floor_ok = bool(np.all(sym >= -margin))
    mixed_ok = condorcet_ok and sym_floor_ok
    if condorcet_ok and not sym_floor_ok:
        i = int(np.argmin(sym))
        witnesses.append(
            (float(ts[i]), f"value plus mirrored value falls {-float(sym[i]):.6g} short of twice the midpoint value")
        )

    sym_exact_ok = bool(np.all(np.abs(sym) <= margin))
    smith_ok = sym_exact_ok and lower_ok
    if not sym_exact_ok:
        i = int(np.argmax(np.abs(sym)))
        witnesses.append(
            (float(ts[i]), f"value plus mirrored value misses twice the midpoint value by {float(abs(sym[i])):.6g}")
        )

    below_ts = ts[below]
    above_ts = ts[ts > 0.5]
    jump_below = (
        abs(float(eval_mapping(spec, float(below_ts[-1]))) - mid) if below_ts.size else 0.0
    )
    jump_above = (
        abs(float(eval_mapping(spec, float(above_ts[0]))) - mid) if above_ts.size else 0.0
    )

    return ConditionReport(
        condorcet_ok=condorcet_ok,
        mixed_ok=mixed_ok,
        smith_ok=smith_ok,
        witnesses=tuple(witnesses),
        grid_resolution=grid_resolution,
        margin=margin,
        jump_below=jump_below,
        jump_above=jump_above,
    )


def mapping_to_dict(spec: MappingSpec) -> dict:
    """Serialize a spec to the documented JSON shape."""
    out: dict = {"kind": spec.kind}
    if spec.kind == "affine":
        out["a"] = spec.a
        out["b"] = spec.b
    elif spec.kind == "power":
        out["k"] = spec.k
    elif spec.kind == "piecewise_linear":
        out["points"] = [[t, v] for t, v in spec.points]
    elif spec.kind == "piecewise_constant":
        out["m_minus"] = spec.m_minus
        out["mid"] = spec.mid
        out["m_plus"] = spec.m_plus
    elif spec.kind == "symmetric_extension":
        assert spec.base is not None
        out["base"] = mapping_to_dict(spec.base)
    if spec.clamp_epsilon:
        out["clamp_epsilon"] = spec.clamp_epsilon
    return out


def mapping_from_dict(data: dict) -> MappingSpec:
    """Parse the documented JSON shape back into a validated spec."""
    if not isinstance(data, dict) or "kind" not in data:
        raise MappingError("mapping JSON must be an object with a 'kind' field")
    kind = data["kind"]
    clamp = float(data.get("clamp_epsilon", LOG_ODDS_CLAMP if kind == "log_odds" else 0.0))
    try:
        if kind == "identity":
            spec = identity()
        elif kind == "log_odds":
            return log_odds(clamp_epsilon=clamp)
        elif kind == "affine":
            return affine(float(data["a"]), float(data["b"]), clamp_epsilon=clamp)
        elif kind == "power":
            return power(float(data["k"]), clamp_epsilon=clamp)
        elif kind == "piecewise_linear":
            return piecewise_linear(data["points"], clamp_epsilon=clamp)
        elif kind == "piecewise_constant":
            return piecewise_constant(
                float(data["m_minus"]), float(data["mid"]), float(data["m_plus"])
            )
        elif kind == "symmetric_extension":
            return symmetric_extension(mapping_from_dict(data["base"]))
        else:
            raise MappingError(f"unknown mapping kind {kind!r}")
    except KeyError as exc:
        raise MappingError(f"mapping JSON for kind {kind!r} is missing field {exc}") from None
    if clamp:
        spec = MappingSpec(kind=spec.kind, clamp_epsilon=clamp)
    return spec
