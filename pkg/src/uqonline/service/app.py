"""FastAPI application wrapping the solver package."""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from .. import __version__
from ..core import DomainError
from ..harness.config import ConfigError
from ..lp import LpError
from ..ski_rental import SolverFailure
from . import handlers, schemas

app = FastAPI(
    title="uqonline",
    version=__version__,
    description=(
        "Robust online decision policies from probabilistic interval "
        "predictions: ski rental and one-way trading."
    ),
)


@app.exception_handler(DomainError)
async def _domain_error(request, exc):  # noqa: ANN001 (fastapi signature)
    raise HTTPException(status_code=400, detail=str(exc))


@app.exception_handler(ConfigError)
async def _config_error(request, exc):  # noqa: ANN001
    raise HTTPException(status_code=400, detail=str(exc))


@app.exception_handler(SolverFailure)
async def _solver_failure(request, exc):  # noqa: ANN001
    raise HTTPException(status_code=500, detail=str(exc))


@app.exception_handler(LpError)
async def _lp_error(request, exc):  # noqa: ANN001
    raise HTTPException(status_code=500, detail=str(exc))


@app.get("/healthz", response_model=schemas.HealthResponse)
def healthz() -> schemas.HealthResponse:
    return schemas.HealthResponse(status="ok", version=__version__)


@app.post("/solve/ski-rental", response_model=schemas.SkiSolveResponse)
def solve_ski(req: schemas.SkiSolveRequest) -> schemas.SkiSolveResponse:
    return handlers.solve_ski(req)


@app.post("/solve/online-search", response_model=schemas.SearchSolveResponse)
def solve_search(req: schemas.SearchSolveRequest) -> schemas.SearchSolveResponse:
    return handlers.solve_search(req)


@app.post("/oracle-check", response_model=schemas.OracleCheckResponse)
def oracle_check(req: schemas.OracleCheckRequest) -> schemas.OracleCheckResponse:
    return handlers.oracle_check(req)


@app.post("/experiments/run", response_model=schemas.ExperimentResponse)
def run_experiment(req: schemas.ExperimentRequest) -> schemas.ExperimentResponse:
    return handlers.run_experiment_request(req)
