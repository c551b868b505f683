"""Pydantic request/response models for the service surface."""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field, model_validator


class SkiSolveRequest(BaseModel):
    ell: int = Field(ge=1, description="interval lower end (days)")
    u: int = Field(ge=1, description="interval upper end (days)")
    delta: float = Field(ge=0.0, le=1.0, description="prediction distrust")
    buy_cost: int = Field(ge=1)
    deterministic: bool = False

    @model_validator(mode="after")
    def _ordered(self) -> "SkiSolveRequest":
        if self.ell > self.u:
            raise ValueError("need ell <= u")
        return self


class SkiSolveResponse(BaseModel):
    drcr: float
    eta: Optional[float] = None
    gamma: Optional[float] = None
    support: Optional[list[int]] = None
    mass: Optional[list[float]] = None
    buy_day: Optional[float] = None


class SearchSolveRequest(BaseModel):
    ell: float
    u: float
    delta: float = Field(ge=0.0, le=1.0)
    m: float = Field(gt=0.0)
    M: float
    eps: float = Field(gt=0.0)

    @model_validator(mode="after")
    def _ordered(self) -> "SearchSolveRequest":
        if not (self.m <= self.ell <= self.u <= self.M):
            raise ValueError("need m <= ell <= u <= M")
        return self


class SearchSolveResponse(BaseModel):
    eta_hat: float
    gamma_hat: float
    drcr: float
    grid: list[float]
    cumulative: list[float]


class OracleCheckRequest(BaseModel):
    problem: Literal["ski-rental", "online-search"]
    trials: int = Field(default=20, ge=1, le=200)
    seed: int = 0


class OracleCheckItem(BaseModel):
    name: str
    passed: bool
    worst_gap: float
    detail: str = ""


class OracleCheckResponse(BaseModel):
    problem: str
    passed: bool
    checks: list[OracleCheckItem]


class ExperimentRequest(BaseModel):
    out_dir: str
    T: int = Field(default=3000, ge=1)
    runs: int = Field(default=10, ge=1)
    seed: int = 7
    B: int = Field(default=2, ge=1)
    horizon_max: int = Field(default=8, ge=1)
    day_support: tuple[int, int] = (1, 8)
    sigma_pattern: list[tuple[int, float]] = [(10, 0.0), (10, 6.0)]
    confidence: float = 0.90
    algorithms: list[str] = ["WOA", "FTP", "RSR-PIP", "OL-Dynamic", "OL-Static"]
    ftp_literal: bool = False


class SummaryRow(BaseModel):
    algorithm: str
    t: int
    mean_cumulative_excess: float


class ExperimentResponse(BaseModel):
    records_csv: str
    summary_csv: str
    rsr_lp_solves: int
    summary: list[SummaryRow]


class HealthResponse(BaseModel):
    status: str
    version: str
