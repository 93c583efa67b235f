"""Command-line entry point: ``hardy-w <subcommand> [flags]``.

Exit codes: 0 success, 1 a checked invariant failed, 2 usage error,
3 numerical failure (diagnostic JSON on stderr).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from typing import Sequence

import numpy as np

from . import __version__
from .analysis import (
    asymptotic_config,
    asymptotic_oracle_check,
    ghz_w_comparison,
    oracle_equivalence_check,
    sample_feasible_bound_check,
)
from .optimizer import (
    ORACLE_MAX_QUBITS,
    AmplitudeGridSpec,
    OptimizationError,
    OptOptions,
    maximize_generic,
    maximize_w_violation,
    perfect_w_table,
    scan_amplitudes,
)
from .quantum_core import Amplitudes, ValidationError, build_ghz_state, lhv_paradox_check

EXIT_OK = 0
EXIT_INVARIANT = 1
EXIT_USAGE = 2
EXIT_NUMERICAL = 3
ASYMPTOTIC_ORACLE_TOL = 1e-10

# Excluded from the manifest options: execution-only flags and the command itself.
_NON_PAYLOAD_FLAGS = {"output", "threads", "func", "command"}


class InvariantFailure(Exception):
    """Result computed, but a property it must satisfy does not hold."""


@dataclass
class RunManifest:
    command: str
    options: dict
    seed: int
    tool_version: str = __version__
    started_at: str = ""
    finished_at: str = ""


@dataclass
class Output:
    kind: str  # "json" or "csv"
    payload: object
    header: Sequence[str] = field(default_factory=tuple)
    ok: bool = True


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def _jsonable(obj):
    """Plain JSON types; non-finite floats become null."""
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj) if math.isfinite(obj) else None
    return obj


def render(out: Output, manifest: RunManifest) -> str:
    if out.kind == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(out.header)
        for row in out.payload:
            writer.writerow([_fmt(v) for v in row])
        return buf.getvalue()
    doc = {"result": out.payload, "manifest": asdict(manifest)}
    return json.dumps(_jsonable(doc), indent=2, allow_nan=False) + "\n"


# --- argument parsing ------------------------------------------------------------------


def _float_list(text: str) -> list[float]:
    try:
        vals = [float(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}") from exc
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def _int_list(text: str) -> list[int]:
    try:
        vals = [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of integers: {text!r}") from exc
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from exc
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def _seed(text: str) -> int:
    try:
        v = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from exc
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be in [0, 2^64)")
    return v


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--output", default=None, help="write here instead of stdout")
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--threads", type=_positive_int, default=None, help="worker processes (default: all cores)")


def _opt_flags(p: argparse.ArgumentParser) -> None:
    d = OptOptions()
    p.add_argument("--starts", type=_positive_int, default=d.starts)
    p.add_argument("--max-iters", type=_positive_int, default=d.max_iters)
    p.add_argument("--f-tol", type=float, default=d.f_tol)
    p.add_argument("--penalty-initial", type=float, default=d.penalty_initial)
    p.add_argument("--penalty-growth", type=float, default=d.penalty_growth)
    p.add_argument("--residual-target", type=float, default=d.residual_target)
    p.add_argument("--planar-only", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hardy-w", description="Hardy nonlocality of W and GHZ states")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("optimize", help="maximize the violation probability for one state")
    p.add_argument("--family", choices=("w", "ghz"), required=True)
    p.add_argument("--amplitudes", type=_float_list, help="W amplitudes a1,a2,...")
    p.add_argument("-n", type=int, help="GHZ qubit count")
    _common(p)
    _opt_flags(p)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("table", help="uniform-W maxima for a range of N (CSV)")
    p.add_argument("--n-min", type=int, default=3)
    p.add_argument("--n-max", type=int, default=10)
    _common(p)
    _opt_flags(p)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("scan", help="three-qubit amplitude scan (CSV)")
    d = AmplitudeGridSpec()
    p.add_argument("--resolution", type=int, default=d.resolution)
    p.add_argument("--margin", type=float, default=d.margin)
    _common(p)
    _opt_flags(p)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("verify-bound", help="random feasible W3 configurations vs 1/9")
    p.add_argument("--samples", type=_positive_int, default=100_000)
    _common(p)
    p.set_defaults(func=cmd_verify_bound)

    p = sub.add_parser("asymptotic", help="the explicit ~1/N construction (CSV)")
    p.add_argument("--n-list", type=_int_list, default=[3, 10, 100, 1000])
    _common(p)
    p.set_defaults(func=cmd_asymptotic)

    p = sub.add_parser("lhv-check", help="enumerate deterministic local strategies")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--drop-last-constraint", action="store_true")
    _common(p)
    p.set_defaults(func=cmd_lhv_check)

    p = sub.add_parser("oracle-check", help="closed form vs dense statevector")
    p.add_argument("--cases", type=_positive_int, default=1000)
    _common(p)
    p.set_defaults(func=cmd_oracle_check)

    p = sub.add_parser("compare", help="W vs GHZ maxima (CSV)")
    p.add_argument("--n-min", type=int, default=3)
    p.add_argument("--n-max", type=int, default=8)
    _common(p)
    _opt_flags(p)
    p.set_defaults(func=cmd_compare)
    return parser


def _workers(args) -> int:
    return args.threads or os.cpu_count() or 1


def _options(args) -> OptOptions:
    return OptOptions(
        starts=args.starts,
        seed=args.seed,
        max_iters=args.max_iters,
        f_tol=args.f_tol,
        penalty_initial=args.penalty_initial,
        penalty_growth=args.penalty_growth,
        residual_target=args.residual_target,
        planar_only=args.planar_only,
        workers=_workers(args),
    )


# --- subcommands ---------------------------------------------------------------------------


def cmd_optimize(args, parser) -> Output:
    opts = _options(args)
    if args.family == "w":
        if args.amplitudes is None or args.n is not None:
            parser.error("--family w takes --amplitudes and no -n")
        result = maximize_w_violation(Amplitudes(tuple(args.amplitudes)), opts)
    else:
        if args.n is None or args.amplitudes is not None:
            parser.error("--family ghz takes -n and no --amplitudes")
        result = maximize_generic(build_ghz_state(args.n), opts)
    return Output("json", result.to_json())


def cmd_table(args, parser) -> Output:
    rows = perfect_w_table(args.n_min, args.n_max, _options(args))
    return Output("csv", rows, ("n", "probability"))


def cmd_scan(args, parser) -> Output:
    grid = AmplitudeGridSpec(resolution=args.resolution, margin=args.margin)
    cells = scan_amplitudes(grid, _options(args))
    return Output("csv", cells, ("alpha", "beta", "probability"))


def cmd_verify_bound(args, parser) -> Output:
    report = sample_feasible_bound_check(args.samples, args.seed, workers=_workers(args))
    return Output("json", report.to_json(), ok=report.ok)


def cmd_asymptotic(args, parser) -> Output:
    if any(n < 3 for n in args.n_list):
        parser.error("--n-list entries must be >= 3")
    rows = []
    for n in args.n_list:
        _, entry = asymptotic_config(n)
        if n <= ORACLE_MAX_QUBITS:
            oracle_p, residual = asymptotic_oracle_check(n)
            if abs(oracle_p - entry.probability) > ASYMPTOTIC_ORACLE_TOL or residual > ASYMPTOTIC_ORACLE_TOL:
                raise InvariantFailure(
                    f"n={n}: closed form {entry.probability!r}, oracle {oracle_p!r}, residual {residual!r}"
                )
        rows.append((entry.n, entry.probability, entry.n_times_p))
    return Output("csv", rows, ("n", "probability", "n_times_p"))


def cmd_lhv_check(args, parser) -> Output:
    report = lhv_paradox_check(args.n, drop_last_constraint=args.drop_last_constraint)
    ok = report.paradox_confirmed != args.drop_last_constraint
    return Output("json", report.to_json(), ok=ok)


def cmd_oracle_check(args, parser) -> Output:
    report = oracle_equivalence_check(args.cases, args.seed)
    return Output("json", report.to_json(), ok=report.ok)


def cmd_compare(args, parser) -> Output:
    rows = ghz_w_comparison(args.n_min, args.n_max, _options(args))
    return Output("csv", [(r.n, r.p_w, r.p_ghz) for r in rows], ("n", "p_w", "p_ghz"))


def _diagnostic(kind: str, exc: Exception, command: str) -> None:
    doc = {"error": kind, "command": command, "message": str(exc)}
    doc.update(getattr(exc, "diagnostics", {}) or {})
    sys.stderr.write(json.dumps(_jsonable(doc), allow_nan=False) + "\n")


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    options = {k: v for k, v in sorted(vars(args).items()) if k not in _NON_PAYLOAD_FLAGS}
    manifest = RunManifest(command=args.command, options=options, seed=args.seed, started_at=_now())
    try:
        out = args.func(args, parser)
    except SystemExit as exc:  # parser.error inside a subcommand
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    except ValidationError as exc:
        sys.stderr.write(f"hardy-w: error: {exc}\n")
        return EXIT_USAGE
    except InvariantFailure as exc:
        _diagnostic("invariant_failed", exc, args.command)
        return EXIT_INVARIANT
    except (OptimizationError, ArithmeticError) as exc:
        _diagnostic(type(exc).__name__, exc, args.command)
        return EXIT_NUMERICAL
    manifest.finished_at = _now()
    text = render(out, manifest)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if not out.ok:
        sys.stderr.write(f"hardy-w: {args.command}: invariant check failed\n")
        return EXIT_INVARIANT
    return EXIT_OK


def main() -> None:
    sys.exit(run())
