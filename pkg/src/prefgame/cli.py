"""Command-line front end.

Subcommands wrap the library one-to-one: load inputs, run one operation,
emit one report.  Reports go to stdout as JSON (``--format json``) or as a
plain key/value table (default).  Exit codes: 0 on success, 1 when a
requested verification found a violation, 2 on invalid input.

The ``monte-carlo`` subcommand is the empirical harness: seeded random
tournaments, solved and judged trial by trial, with violation witnesses
optionally dumped for standalone reproduction.  Per-trial randomness comes
from SeedSequence([master_seed, trial_index]), so trials are independent
of execution order.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from dataclasses import dataclass

import numpy as np

from .core import (
    PayoffMatrix,
    Policy,
    PreferenceMatrix,
    PrefGameError,
    ValidationError,
    apply_mapping,
    make_payoff,
    make_policy,
    validate_preferences,
)
from .generators import GeneratorConfig, game_four, game_six, game_two, random_tournament
from .mappings import (
    MappingSpec,
    check_conditions,
    identity,
    log_odds,
    mapping_from_dict,
    mapping_to_dict,
)
from .preference_matching import (
    btl_preferences,
    degenerate_family,
    kkt_verify,
    make_btl,
    pm_gap,
    pm_policy,
    RatioPayoffSpec,
)
from .social_choice import consistency_verdict, smith_decomposition
from .solver import solve_maximin
from . import __version__

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_INVALID = 2

_BUILTIN_MAPPINGS = {
    "identity": identity,
    "log_odds": log_odds,
}


@dataclass(frozen=True)
class MonteCarloSummary:
    """Tally of one seeded verification run."""

    trials: int
    seed: int
    psi: dict
    n_min: int
    n_max: int
    force_no_winner: bool
    violations_condorcet: int
    violations_smith: int
    violations_mixed: int
    worst_mass_outside_smith: float
    elapsed_ms: int

    def to_dict(self, include_timing: bool = True) -> dict:
        out = {
            "trials": self.trials,
            "seed": self.seed,
            "psi": self.psi,
            "n_min": self.n_min,
            "n_max": self.n_max,
            "force_no_winner": self.force_no_winner,
            "violations_condorcet": self.violations_condorcet,
            "violations_smith": self.violations_smith,
            "violations_mixed": self.violations_mixed,
            "worst_mass_outside_smith": self.worst_mass_outside_smith,
        }
        if include_timing:
            out["elapsed_ms"] = self.elapsed_ms
        return out

    @property
    def total_violations(self) -> int:
        return self.violations_condorcet + self.violations_smith + self.violations_mixed


def monte_carlo(
    mapping: MappingSpec,
    trials: int,
    n_range: tuple[int, int] = (3, 8),
    seed: int = 42,
    force_no_winner: bool = False,
    witness_dir: str | None = None,
) -> MonteCarloSummary:
    """Draw, solve and judge ``trials`` random tournaments.

    Each trial derives its own generator state from the master seed and the
    trial index, draws a size uniformly from ``n_range``, and checks the
    solved game's verdict.  Violations are tallied; when ``witness_dir`` is
    set, each violating trial is dumped as a standalone JSON file.
    """
    n_min, n_max = n_range
    if trials < 1:
        raise ValidationError(f"trials must be >= 1, got {trials}")
    if not 2 <= n_min <= n_max <= 10:
        raise ValidationError(f"need 2 <= n_min <= n_max <= 10, got [{n_min}, {n_max}]")
    if force_no_winner and n_min < 3:
        raise ValidationError("force_no_winner requires n_min >= 3; two responses always have a winner")
    start = time.perf_counter()
    violations_condorcet = 0
    violations_smith = 0
    violations_mixed = 0
    worst_mass = 0.0
    for trial in range(trials):
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, trial])))
        n = int(rng.integers(n_min, n_max + 1))
        sub_seed = int(rng.integers(0, 2**63))
        cfg = GeneratorConfig(n=n, seed=sub_seed, force_no_winner=force_no_winner)
        pref = random_tournament(cfg)
        nash = solve_maximin(apply_mapping(pref, mapping))
        verdict = consistency_verdict(pref, nash)
        decomposition = smith_decomposition(pref)
        top_is_group = len(decomposition.top_group()) > 1
        bad_condorcet = verdict.condorcet_consistent is False
        bad_smith = not verdict.smith_consistent
        bad_mixed = top_is_group and not verdict.is_mixed
        violations_condorcet += int(bad_condorcet)
        violations_smith += int(bad_smith)
        violations_mixed += int(bad_mixed)
        worst_mass = max(worst_mass, verdict.mass_outside_smith)
        if (bad_condorcet or bad_smith or bad_mixed) and witness_dir is not None:
            _dump_witness(witness_dir, trial, pref, nash, verdict)
    elapsed_ms = int((time.perf_counter() - start) * 1000.0)
    return MonteCarloSummary(
        trials=trials,
        seed=seed,
        psi=mapping_to_dict(mapping),
        n_min=n_min,
        n_max=n_max,
        force_no_winner=force_no_winner,
        violations_condorcet=violations_condorcet,
        violations_smith=violations_smith,
        violations_mixed=violations_mixed,
        worst_mass_outside_smith=worst_mass,
        elapsed_ms=elapsed_ms,
    )


def _dump_witness(witness_dir, trial, pref, nash, verdict) -> None:
    os.makedirs(witness_dir, exist_ok=True)
    payload = {
        "trial": trial,
        "preferences": pref.to_dict(),
        "nash": nash.to_dict(),
        "verdict": verdict.to_dict(),
    }
    path = os.path.join(witness_dir, f"witness_trial_{trial:05d}.json")
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    logger.info("violation witness written to %s", path)


def _load_json(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def load_preferences(path: str) -> PreferenceMatrix:
    """Read a preference matrix from JSON ({"n", "p"}) or CSV rows."""
    if path.endswith(".csv"):
        raw = np.loadtxt(path, delimiter=",", ndmin=2)
        return validate_preferences(raw)
    data = _load_json(path)
    if "p" not in data:
        raise ValidationError(f"{path}: preference JSON needs a 'p' field")
    pref = validate_preferences(data["p"])
    if "n" in data and int(data["n"]) != pref.n:
        raise ValidationError(f"{path}: declared n={data['n']} but matrix is {pref.n}x{pref.n}")
    return pref


def load_payoff(path: str) -> PayoffMatrix:
    data = _load_json(path)
    if "a" not in data:
        raise ValidationError(f"{path}: payoff JSON needs an 'a' field")
    payoff = make_payoff(data["a"])
    if "n" in data and int(data["n"]) != payoff.n:
        raise ValidationError(f"{path}: declared n={data['n']} but matrix is {payoff.n}x{payoff.n}")
    return payoff


def load_policy(path: str) -> Policy:
    data = _load_json(path)
    if "w" not in data:
        raise ValidationError(f"{path}: policy JSON needs a 'w' field")
    return make_policy(data["w"])


def load_mapping(arg: str) -> MappingSpec:
    """Resolve a mapping argument: builtin name or JSON file path."""
    if arg in _BUILTIN_MAPPINGS and not os.path.exists(arg):
        return _BUILTIN_MAPPINGS[arg]()
    return mapping_from_dict(_load_json(arg))


def _format_value(value) -> str:
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def _render_table(data: dict, indent: int = 0) -> list[str]:
    pad = " " * indent
    lines: list[str] = []
    for key, value in data.items():
        if isinstance(value, dict):
            lines.append(f"{pad}{key}:")
            lines.extend(_render_table(value, indent + 2))
        elif isinstance(value, list) and value and isinstance(value[0], (list, tuple)):
            lines.append(f"{pad}{key}:")
            for row in value:
                lines.append(pad + "  " + "  ".join(_format_value(v) for v in row))
        elif isinstance(value, list):
            lines.append(f"{pad}{key}: " + "  ".join(_format_value(v) for v in value))
        else:
            lines.append(f"{pad}{key}: {_format_value(value)}")
    return lines


def emit(data: dict, args) -> None:
    if args.format == "json":
        text = json.dumps(data, indent=2, sort_keys=True) + "\n"
    else:
        text = "\n".join(_render_table(data)) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_validate(args) -> int:
    try:
        pref = load_preferences(args.pref)
    except ValidationError as exc:
        emit({"valid": False, "reason": str(exc)}, args)
        return EXIT_VIOLATION
    emit({"valid": True, "n": pref.n, "no_tie": pref.no_tie}, args)
    return EXIT_OK


def _cmd_solve(args) -> int:
    pref = load_preferences(args.pref)
    mapping = load_mapping(args.psi)
    tolerance = args.tol if args.tol is not None else 1e-9
    nash = solve_maximin(apply_mapping(pref, mapping), tolerance=tolerance)
    emit(nash.to_dict(), args)
    return EXIT_OK


def _cmd_decompose(args) -> int:
    pref = load_preferences(args.pref)
    decomposition = smith_decomposition(pref)
    emit(decomposition.to_dict(), args)
    return EXIT_OK


def _cmd_check_psi(args) -> int:
    mapping = load_mapping(args.psi)
    report = check_conditions(mapping, grid_resolution=args.grid, margin=args.margin)
    emit(report.to_dict(), args)
    all_ok = report.condorcet_ok and report.mixed_ok and report.smith_ok
    return EXIT_OK if all_ok else EXIT_VIOLATION


def _cmd_verdict(args) -> int:
    pref = load_preferences(args.pref)
    mapping = load_mapping(args.psi)
    nash = solve_maximin(apply_mapping(pref, mapping))
    verdict = consistency_verdict(pref, nash)
    emit(verdict.to_dict(), args)
    bad = verdict.condorcet_consistent is False or not verdict.smith_consistent
    return EXIT_VIOLATION if bad else EXIT_OK


def _parse_rewards(arg: str):
    if os.path.exists(arg):
        data = _load_json(arg)
        if "rewards" not in data:
            raise ValidationError(f"{arg}: rewards JSON needs a 'rewards' field")
        return data["rewards"]
    try:
        return [float(part) for part in arg.split(",") if part.strip()]
    except ValueError:
        raise ValidationError(f"rewards must be a JSON file or comma-separated floats, got {arg!r}")


def _cmd_btl(args) -> int:
    model = make_btl(_parse_rewards(args.rewards))
    pref = btl_preferences(model)
    policy = pm_policy(model)
    emit({"preferences": pref.to_dict(), "pm_policy": policy.to_dict()}, args)
    return EXIT_OK


def _cmd_kkt(args) -> int:
    payoff = load_payoff(args.payoff)
    target = load_policy(args.target)
    tolerance = args.tol if args.tol is not None else 1e-8
    certificate = kkt_verify(payoff, target, tolerance=tolerance)
    emit(certificate.to_dict(), args)
    return EXIT_OK if certificate.feasible else EXIT_VIOLATION


def _ratio_spec_from_args(args, target_n: int) -> RatioPayoffSpec:
    if args.family == "btl":
        c = args.c if args.c is not None else 0.5

        def f(x):
            return x / (1.0 + x)

        return RatioPayoffSpec(f=f, diagonal_c=c)
    n = args.family_n if args.family_n is not None else target_n
    c = args.c if args.c is not None else 0.0
    return degenerate_family(n, c=c, c2=args.c2)


def _cmd_pm_probe(args) -> int:
    target = load_policy(args.target)
    spec = _ratio_spec_from_args(args, target.n)
    tolerance = args.tol if args.tol is not None else 1e-8
    probe = pm_gap(spec, target, tolerance=tolerance)
    emit(probe.to_dict(), args)
    return EXIT_OK


def _cmd_gen(args) -> int:
    if args.what == "random":
        cfg = GeneratorConfig(
            n=args.n,
            seed=args.seed,
            strength_low=args.strength_low,
            strength_high=args.strength_high,
            force_no_winner=args.force_no_winner,
        )
        pref = random_tournament(cfg)
    else:
        # Table games under the identity mapping are themselves valid
        # preference matrices, which any downstream mapping can re-map.
        shape = identity()
        if args.what == "table2":
            payoff = game_two(shape, args.t)
        elif args.what == "table4":
            payoff = game_four(shape, args.t1, args.t2)
        else:
            payoff = game_six(shape, args.t1, args.t2)
        pref = validate_preferences(payoff.a)
    emit(pref.to_dict(), args)
    return EXIT_OK


def _cmd_monte_carlo(args) -> int:
    mapping = load_mapping(args.psi)
    summary = monte_carlo(
        mapping,
        trials=args.trials,
        n_range=(args.n_min, args.n_max),
        seed=args.seed,
        force_no_winner=args.force_no_winner,
        witness_dir=args.witness_dir,
    )
    emit(summary.to_dict(include_timing=not args.no_timing), args)
    return EXIT_VIOLATION if summary.total_violations > 0 else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "table"), default="table")
    common.add_argument("--seed", type=int, default=42)
    common.add_argument("--tol", type=float, default=None)
    common.add_argument("--out", default=None)
    common.add_argument("--witness-dir", dest="witness_dir", default=None)
    common.add_argument("--no-timing", dest="no_timing", action="store_true")

    parser = argparse.ArgumentParser(
        prog="prefgame",
        description="Solve mapped preference games and verify their social-choice behavior.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="check a preference matrix file")
    p.add_argument("--pref", required=True)
    p.set_defaults(handler=_cmd_validate)

    p = sub.add_parser("solve", parents=[common], help="solve the mapped game")
    p.add_argument("--pref", required=True)
    p.add_argument("--psi", required=True)
    p.set_defaults(handler=_cmd_solve)

    p = sub.add_parser("decompose", parents=[common], help="ordered dominance decomposition")
    p.add_argument("--pref", required=True)
    p.set_defaults(handler=_cmd_decompose)

    p = sub.add_parser("check-psi", parents=[common], help="grid-check the mapping conditions")
    p.add_argument("--psi", required=True)
    p.add_argument("--grid", type=int, default=10_001)
    p.add_argument("--margin", type=float, default=1e-12)
    p.set_defaults(handler=_cmd_check_psi)

    p = sub.add_parser("verdict", parents=[common], help="solve and judge consistency")
    p.add_argument("--pref", required=True)
    p.add_argument("--psi", required=True)
    p.set_defaults(handler=_cmd_verdict)

    p = sub.add_parser("btl", parents=[common], help="preferences and matching policy from rewards")
    p.add_argument("--rewards", required=True)
    p.set_defaults(handler=_cmd_btl)

    p = sub.add_parser("kkt", parents=[common], help="certify a target as maximin solution")
    p.add_argument("--payoff", required=True)
    p.add_argument("--target", required=True)
    p.set_defaults(handler=_cmd_kkt)

    p = sub.add_parser("pm-probe", parents=[common], help="probe a ratio family against a target")
    p.add_argument("--target", required=True)
    p.add_argument("--family", choices=("btl", "degenerate"), default="btl")
    p.add_argument("--c", type=float, default=None)
    p.add_argument("--c2", type=float, default=1.0)
    p.add_argument("--family-n", dest="family_n", type=int, default=None)
    p.set_defaults(handler=_cmd_pm_probe)

    p = sub.add_parser("gen", parents=[common], help="emit a preference matrix")
    p.add_argument("what", choices=("random", "table2", "table4", "table6"))
    p.add_argument("--n", type=int, default=5)
    p.add_argument("--strength-low", dest="strength_low", type=float, default=0.55)
    p.add_argument("--strength-high", dest="strength_high", type=float, default=0.95)
    p.add_argument("--force-no-winner", dest="force_no_winner", action="store_true")
    p.add_argument("--t", type=float, default=0.7)
    p.add_argument("--t1", type=float, default=0.6)
    p.add_argument("--t2", type=float, default=0.7)
    p.set_defaults(handler=_cmd_gen)

    p = sub.add_parser("monte-carlo", parents=[common], help="seeded random verification run")
    p.add_argument("--psi", default="identity")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--n-min", dest="n_min", type=int, default=3)
    p.add_argument("--n-max", dest="n_max", type=int, default=8)
    p.add_argument("--force-no-winner", dest="force_no_winner", action="store_true")
    p.set_defaults(handler=_cmd_monte_carlo)

    return parser


def run(argv: list[str] | None = None) -> int:
    """Execute one CLI invocation and return its exit code."""
    level = os.environ.get("PREFGAME_LOG")
    if level:
        logging.basicConfig(level=getattr(logging, level.upper(), logging.WARNING), stream=sys.stderr)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except PrefGameError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


def main() -> None:
    sys.exit(run())
