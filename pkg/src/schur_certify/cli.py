"""Command-line front end.

Exit codes: 0 success, 2 usage error, 3 bad input data, 4 resource guard.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import certification as cert
from . import characters, monte_carlo, tomography_risk
from .partitions import dim_bounds, parse_partition, partition_dims
from .unitary import NotUnitaryError, UnitaryMatrix, eigenphases

DEFAULT_SEED = 0xC0FFEE
SEED_ENV = "SCHUR_CERTIFY_SEED"
INLINE_MAX_D = 4

EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_GUARD = 4


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


def default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return DEFAULT_SEED
    try:
        return int(raw, 0)
    except ValueError:
        raise UsageError(f"{SEED_ENV}={raw!r} is not an integer")


def _floats(text: str) -> list[float]:
    try:
        return [float(t) for t in text.replace(",", " ").split()]
    except ValueError:
        raise UsageError(f"expected a comma-separated list of numbers, got {text!r}")


def load_matrix(source: str | None, d: int) -> UnitaryMatrix:
    """Read a matrix from a JSON file, inline JSON, or return the identity when omitted."""
    if source is None:
        return UnitaryMatrix.identity(d)
    stripped = source.lstrip()
    try:
        if stripped.startswith("{"):
            u = UnitaryMatrix.loads(source)
            if u.d > INLINE_MAX_D:
                raise DataError(f"inline matrices are limited to d <= {INLINE_MAX_D}; use a file")
        else:
            path = Path(source)
            if not path.is_file():
                raise DataError(f"matrix file not found: {source}")
            u = UnitaryMatrix.loads(path.read_text())
    except NotUnitaryError as exc:
        raise DataError(str(exc))
    if u.d != d:
        raise DataError(f"matrix has d = {u.d}, expected d = {d}")
    return u


def _emit(payload: dict) -> None:
    sys.stdout.write(json.dumps(payload, sort_keys=False) + "\n")


def _plan_from(args) -> cert.TesterPlan:
    try:
        return cert.plan(args.kind, args.d, args.eps, rounds=getattr(args, "rounds", None))
    except ValueError as exc:
        raise UsageError(str(exc))


def cmd_plan(args) -> int:
    _emit(_plan_from(args).to_dict())
    return 0


def cmd_prob(args) -> int:
    p = _plan_from(args)
    u, v = load_matrix(args.u, p.d), load_matrix(args.v, p.d)
    report = cert.accept_prob(u, v, p)
    _emit({"plan": p.to_dict(), "distance": cert.distance(u, v), "report": report.to_dict()})
    return 0


def cmd_certify(args) -> int:
    p = _plan_from(args)
    u, v = load_matrix(args.u, p.d), load_matrix(args.v, p.d)
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    stats = monte_carlo.run_trials(u, v, p, args.trials, args.seed)
    # the midpoint of the 1/3 and 2/3 thresholds separates the promise cases
    decision = "accept" if stats.p_hat >= 0.5 else "reject"
    _emit({"decision": decision, "plan": p.to_dict(), "stats": stats.to_dict()})
    return 0


def cmd_sweep(args) -> int:
    grid = _floats(args.eps_grid)
    if not grid:
        raise UsageError("--eps-grid is empty")
    try:
        rows = monte_carlo.sweep_distance(args.kind, args.d, grid, args.per_point, args.seed)
    except ValueError as exc:
        raise UsageError(str(exc))
    if args.format == "json":
        meta = {
            "kind": cert.TesterKind.parse(args.kind).value,
            "d": args.d,
            "per_point": args.per_point,
            "seed": args.seed,
            "window": monte_carlo.WINDOW,
        }
        sys.stdout.write(monte_carlo.rows_to_json(rows, meta) + "\n")
    else:
        sys.stdout.write(monte_carlo.rows_to_csv(rows))
    return 0


def cmd_bounds(args) -> int:
    out: dict = {}
    if args.dirichlet_s is not None:
        s = args.dirichlet_s
        if s < 1 or s % 2 == 0:
            raise UsageError("--dirichlet-s must be an odd positive integer")
        grid = np.linspace(-np.pi, np.pi, args.grid)
        out["dirichlet"] = {"s": s, "grid": args.grid, "holds": all(cert.dirichlet_bound_check(s, x) for x in grid)}
    if args.kind is not None:
        p = _plan_from(args)
        n = args.n or p.n
        entry = {"plan": p.to_dict()}
        if p.kind.is_qubit:
            try:
                entry["soundness_bound"] = cert.soundness_bound_qubit(n, p.epsilon)
            except ValueError as exc:
                raise UsageError(str(exc))
        else:
            entry["soundness_bound"] = cert.ratio_bound(p)
            if args.u is not None:
                u, v = load_matrix(args.u, p.d), load_matrix(args.v, p.d)
                entry["blowup"] = cert.blowup_report(u, v, p.d, p.s, p.epsilon).to_dict()
        if args.u is not None:
            u, v = load_matrix(args.u, p.d), load_matrix(args.v, p.d)
            entry["trace_identity_residual"] = cert.trace_identity_check(eigenphases(u.dag @ v))
        out["tester"] = entry
    if not out:
        raise UsageError("bounds needs --kind/--eps and/or --dirichlet-s")
    _emit(out)
    return 0


def cmd_risk(args) -> int:
    if args.eps is not None:
        try:
            n = tomography_risk.plan_queries_tomography(args.d, args.eps)
        except ValueError as exc:
            raise UsageError(str(exc))
        profile = tomography_risk.risk_profile(n, args.d)
        # empirical constant C in n = C d^2 eps^(-1/2)
        constant = n * args.eps**0.5 / args.d**2
        _emit({**profile.to_dict(), "epsilon": args.eps, "queries": n, "scaling_constant": constant})
        return 0
    if args.n is None:
        raise UsageError("risk needs --n or --eps")
    regime = tomography_risk.Regime.finite_sum if args.finite else tomography_risk.Regime.closed_form
    try:
        profile = tomography_risk.risk_profile(args.n, args.d, regime)
    except tomography_risk.EnumerationGuardError:
        raise
    except ValueError as exc:
        raise UsageError(str(exc))
    _emit(profile.to_dict())
    return 0


def cmd_character(args) -> int:
    phases = _floats(args.phases)
    if not phases:
        raise UsageError("--phases is empty")
    try:
        lam = parse_partition(args.partition, len(phases))
        value = characters.evaluate(lam, phases, args.method)
    except characters.OracleTooLarge:
        raise
    except ValueError as exc:
        raise UsageError(str(exc))
    _emit(value.to_dict())
    return 0


def cmd_dims(args) -> int:
    try:
        lam = parse_partition(args.partition, args.d)
    except ValueError as exc:
        raise UsageError(str(exc))
    out = {"partition": list(lam.parts), "n": lam.n, "d": lam.d, **partition_dims(lam).to_dict()}
    if lam.n >= 1:
        out["bounds"] = dim_bounds(lam).to_dict()
    out["ancilla"] = cert.ancilla_requirement(lam).to_dict()
    _emit(out)
    return 0


KINDS = [k.value.replace("_", "-") for k in cert.TesterKind]


def _add_plan_args(p: argparse.ArgumentParser, required: bool = True) -> None:
    p.add_argument("--kind", choices=KINDS, required=required, help="tester kind")
    p.add_argument("--d", type=int, default=2, help="dimension of the unitaries (default 2)")
    p.add_argument("--eps", type=float, required=required, help="distance gap epsilon in (0, 1]")
    p.add_argument("--rounds", type=int, default=None, help="override the number of rounds")


def _add_matrix_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--u", default=None, help="U as a JSON file or inline JSON (default identity)")
    p.add_argument("--v", default=None, help="V as a JSON file or inline JSON (default identity)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="schur-certify", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("plan", help="print a tester plan")
    _add_plan_args(p)
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("prob", help="exact acceptance probability for (U, V)")
    _add_plan_args(p)
    _add_matrix_args(p)
    p.set_defaults(func=cmd_prob)

    p = sub.add_parser("certify", help="simulate tester runs and decide")
    _add_plan_args(p)
    _add_matrix_args(p)
    p.add_argument("--trials", type=int, default=1000, help="number of simulated runs")
    p.add_argument("--seed", type=lambda t: int(t, 0), default=None, help="RNG seed")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("sweep", help="worst acceptance near distance epsilon over a grid")
    p.add_argument("--kind", choices=KINDS, required=True, help="tester kind")
    p.add_argument("--d", type=int, default=2, help="dimension (default 2)")
    p.add_argument("--eps-grid", required=True, help="comma-separated epsilon values")
    p.add_argument("--per-point", type=int, default=64, help="instances per grid point")
    p.add_argument("--seed", type=lambda t: int(t, 0), default=None, help="RNG seed")
    p.add_argument("--format", choices=["csv", "json"], default="csv", help="output format (default csv)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("bounds", help="soundness bounds, pair-counting report, Dirichlet check")
    _add_plan_args(p, required=False)
    _add_matrix_args(p)
    p.add_argument("--n", type=int, default=None, help="copies for the qubit bound (default: planner)")
    p.add_argument("--dirichlet-s", type=int, default=None, help="odd s for the |sin sx| <= s|sin x| scan")
    p.add_argument("--grid", type=int, default=10_000, help="grid points on [-pi, pi]")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("risk", help="tomography risk bound or query count")
    p.add_argument("--d", type=int, required=True, help="dimension")
    p.add_argument("--n", type=int, default=None, help="number of copies")
    p.add_argument("--eps", type=float, default=None, help="target infidelity; prints the query count")
    p.add_argument("--finite", action="store_true", help="use the finite-n partition sum")
    p.set_defaults(func=cmd_risk)

    p = sub.add_parser("character", help="evaluate an irrep character at given phases")
    p.add_argument("--partition", required=True, help="e.g. 2,1")
    p.add_argument("--phases", required=True, help="comma-separated eigenphases")
    p.add_argument("--method", choices=[m.value for m in characters.Method], default=None)
    p.set_defaults(func=cmd_character)

    p = sub.add_parser("dims", help="irrep and multiplicity dimensions of a partition")
    p.add_argument("--partition", required=True, help="e.g. 3,1")
    p.add_argument("--d", type=int, default=None, help="length bound (default: number of parts)")
    p.set_defaults(func=cmd_dims)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if hasattr(args, "seed") and args.seed is None:
            args.seed = default_seed()
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (tomography_risk.EnumerationGuardError, characters.OracleTooLarge) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GUARD


if __name__ == "__main__":
    sys.exit(main())
