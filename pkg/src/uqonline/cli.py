"""Command-line client over the service layer.

Subcommands marshal flags into the same request models the HTTP endpoints
accept and call the shared handlers in process, so the CLI carries no solver
logic of its own.

Exit codes: 0 success, 2 invalid configuration or arguments, 3 solver
failure, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import sys

from pydantic import ValidationError

from .core import DomainError
from .harness.charts import ChartError, emit_chart
from .harness.config import ConfigError, load_config
from .harness.experiment import run_experiment
from .lp import LpError
from .service import handlers, schemas
from .ski_rental import SolverFailure

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_SOLVER = 3
EXIT_IO = 4

_OVERRIDE_KEYS = (
    "problem", "T", "runs", "seed", "B", "horizon_max", "day_support",
    "sigma_pattern", "confidence", "algorithms", "m", "M", "grid_eps",
    "ftp_literal",
)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="uqonline",
        description="Robust online policies from interval predictions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve-ski", help="optimal ski-rental policy for one prediction")
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--u", type=int, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--B", type=int, required=True)
    p.add_argument("--deterministic", action="store_true",
                   help="closed-form deterministic rule instead of the program")

    p = sub.add_parser("solve-search", help="optimal selling schedule for one prediction")
    p.add_argument("--ell", type=float, required=True)
    p.add_argument("--u", type=float, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--m", type=float, required=True)
    p.add_argument("--M", type=float, required=True)
    p.add_argument("--eps", type=float, required=True)

    p = sub.add_parser("run", help="run the multi-instance experiment")
    p.add_argument("--config", required=True, help="path to a key = value file")
    p.add_argument("--out", default="out", help="output directory")
    for key in _OVERRIDE_KEYS:
        p.add_argument(f"--{key}", default=None, help=f"override config key {key}")

    p = sub.add_parser("chart", help="render cumulative-excess curves from a CSV")
    p.add_argument("--csv", required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("oracle-check", help="brute-force cross-validation suites")
    p.add_argument("--problem", choices=("ski-rental", "online-search"), required=True)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("serve", help="start the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)

    return parser


def _cmd_solve_ski(args: argparse.Namespace) -> int:
    req = schemas.SkiSolveRequest(
        ell=args.ell, u=args.u, delta=args.delta, buy_cost=args.B,
        deterministic=args.deterministic,
    )
    res = handlers.solve_ski(req)
    if res.buy_day is not None:
        print(f"buy_day = {res.buy_day:.9g}")
        print(f"drcr = {res.drcr:.9g}")
    else:
        print(f"eta = {res.eta:.9g}")
        print(f"gamma = {res.gamma:.9g}")
        print(f"drcr = {res.drcr:.9g}")
        pairs = ", ".join(
            f"day {d}: {p:.6f}" for d, p in zip(res.support, res.mass)
        )
        print(f"policy: {pairs}")
    return EXIT_OK


def _cmd_solve_search(args: argparse.Namespace) -> int:
    req = schemas.SearchSolveRequest(
        ell=args.ell, u=args.u, delta=args.delta, m=args.m, M=args.M, eps=args.eps
    )
    res = handlers.solve_search(req)
    print(f"eta_hat = {res.eta_hat:.9g}")
    print(f"gamma_hat = {res.gamma_hat:.9g}")
    print(f"drcr = {res.drcr:.9g}")
    print(f"grid_points = {len(res.grid)}")
    sellable = sum(
        1 for a, b in zip([0.0] + res.cumulative[:-1], res.cumulative) if b > a + 1e-12
    )
    print(f"active_levels = {sellable}")
    return EXIT_OK


def _cmd_run(args: argparse.Namespace) -> int:
    overrides = {
        key: getattr(args, key)
        for key in _OVERRIDE_KEYS
        if getattr(args, key) is not None
    }
    config = load_config(args.config, overrides)
    result = run_experiment(config, args.out)
    print(f"records: {result.records_path}")
    print(f"summary: {result.summary_path}")
    print(f"rsr_lp_solves: {result.rsr_solve_count}")
    for name, t, mean in result.summary:
        print(f"{name} @ t={t}: mean_cumulative_excess = {mean:.6f}")
    return EXIT_OK


def _cmd_chart(args: argparse.Namespace) -> int:
    out = emit_chart(args.csv, args.out)
    print(f"chart: {out}")
    return EXIT_OK


def _cmd_oracle_check(args: argparse.Namespace) -> int:
    req = schemas.OracleCheckRequest(
        problem=args.problem, trials=args.trials, seed=args.seed
    )
    res = handlers.oracle_check(req)
    for check in res.checks:
        mark = "PASS" if check.passed else "FAIL"
        extra = f" ({check.detail})" if check.detail else ""
        print(f"[{mark}] {check.name}: worst gap {check.worst_gap:.3e}{extra}")
    if not res.passed:
        print("oracle-check: FAILED")
        return EXIT_SOLVER
    print("oracle-check: all checks passed")
    return EXIT_OK


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service.app import app

    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_OK


_COMMANDS = {
    "solve-ski": _cmd_solve_ski,
    "solve-search": _cmd_solve_search,
    "run": _cmd_run,
    "chart": _cmd_chart,
    "oracle-check": _cmd_oracle_check,
    "serve": _cmd_serve,
}


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ConfigError, DomainError, ChartError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SolverFailure, LpError) as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except OSError as exc:
        path = getattr(exc, "filename", None)
        where = f" ({path})" if path else ""
        print(f"i/o failure: {exc}{where}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
