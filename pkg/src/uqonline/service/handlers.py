"""Service-layer handlers shared by the HTTP app and the CLI."""

from __future__ import annotations

from ..core import Pip
from ..crosscheck import search_crosscheck, ski_crosscheck
from ..harness.config import ExperimentConfig
from ..harness.experiment import run_experiment
from ..online_search import solve_pfa
from ..ski_rental import dsr_pip_buy_day, dsr_pip_drcr, solve_rsr
from . import schemas


def solve_ski(req: schemas.SkiSolveRequest) -> schemas.SkiSolveResponse:
    pip = Pip(float(req.ell), float(req.u), req.delta)
    if req.deterministic:
        return schemas.SkiSolveResponse(
            drcr=dsr_pip_drcr(pip, req.buy_cost),
            buy_day=dsr_pip_buy_day(pip, req.buy_cost),
        )
    sol = solve_rsr(pip, req.buy_cost)
    return schemas.SkiSolveResponse(
        drcr=sol.drcr,
        eta=sol.eta,
        gamma=sol.gamma,
        support=list(sol.policy.support),
        mass=list(sol.policy.mass),
    )


def solve_search(req: schemas.SearchSolveRequest) -> schemas.SearchSolveResponse:
    sol = solve_pfa(Pip(req.ell, req.u, req.delta), req.m, req.M, req.eps)
    return schemas.SearchSolveResponse(
        eta_hat=sol.eta_hat,
        gamma_hat=sol.gamma_hat,
        drcr=sol.drcr,
        grid=list(sol.protection.grid.values),
        cumulative=list(sol.protection.cumulative),
    )


def oracle_check(req: schemas.OracleCheckRequest) -> schemas.OracleCheckResponse:
    if req.problem == "ski-rental":
        report = ski_crosscheck(trials=req.trials, seed=req.seed)
    else:
        report = search_crosscheck(trials=req.trials, seed=req.seed)
    return schemas.OracleCheckResponse(
        problem=report.problem,
        passed=report.passed,
        checks=[
            schemas.OracleCheckItem(
                name=c.name, passed=c.passed, worst_gap=c.worst_gap, detail=c.detail
            )
            for c in report.checks
        ],
    )


def run_experiment_request(req: schemas.ExperimentRequest) -> schemas.ExperimentResponse:
    config = ExperimentConfig(
        problem="ski-rental",
        T=req.T,
        runs=req.runs,
        seed=req.seed,
        B=req.B,
        horizon_max=req.horizon_max,
        day_support=tuple(req.day_support),
        sigma_pattern=tuple(tuple(p) for p in req.sigma_pattern),
        confidence=req.confidence,
        algorithms=tuple(req.algorithms),
        ftp_literal=req.ftp_literal,
    ).validate()
    result = run_experiment(config, req.out_dir)
    return schemas.ExperimentResponse(
        records_csv=result.records_path,
        summary_csv=result.summary_path,
        rsr_lp_solves=result.rsr_solve_count,
        summary=[
            schemas.SummaryRow(algorithm=a, t=t, mean_cumulative_excess=v)
            for a, t, v in result.summary
        ],
    )
