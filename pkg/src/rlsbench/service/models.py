"""Pydantic request/response models for the HTTP service."""

from __future__ import annotations

from pydantic import BaseModel, Field


class HealthResponse(BaseModel):
    status: str
    version: str


class GenerateRequest(BaseModel):
    ensemble: str = "gaussian"
    rho: float | None = None
    n: int = Field(ge=1)
    d: int = Field(ge=1)
    k: int = Field(ge=0)
    sigma: float = Field(default=0.0, ge=0.0)
    seed: int | None = None


class GenerateResponse(BaseModel):
    instance_text: str
    ensemble: str
    n: int
    d: int
    k: int
    sigma: float
    seed: int


class SolverOptions(BaseModel):
    solver: str = "rls"  # rls | rls_fixed[n0=..,m=..] | rawls | omp
    k: int | None = None  # defaults to the instance sparsity
    seed: int | None = None
    m: int = Field(default=100, ge=1)
    frac_lo: float = 0.85
    frac_hi: float = 0.9
    votes: int = Field(default=5, ge=1)
    vote_scope: str = "step"


class SolveRequest(BaseModel):
    instance_text: str
    options: SolverOptions = SolverOptions()


class SolveResponse(BaseModel):
    solver: str
    support: list[tuple[int, int]]
    true_support: list[int]
    set_match: bool
    signed_match: bool
    wall_seconds: float


class BenchRequest(BaseModel):
    config_text: str
    overrides: dict[str, str] = {}
    threads: int = Field(default=1, ge=1)
    plot_data: bool = False


class RecordModel(BaseModel):
    ensemble: str
    d: int
    n: int
    k: int
    sigma: float
    solver: str
    trials: int
    successes_set: int
    successes_signed: int
    prob_set: float
    prob_signed: float
    wall_seconds: float
    degenerate_failures: int


class BenchResponse(BaseModel):
    csv_text: str
    records: list[RecordModel]
    summary: str
    plot_files: dict[str, str] = {}


class TheoryRequest(BaseModel):
    d: int = Field(ge=2)
    n_values: list[int]
    trials: int = Field(default=100, ge=2)
    seed: int | None = None


class ErrorNormRow(BaseModel):
    d: int
    n: int
    lam: float
    predicted: float
    empirical_mean: float
    std_error: float
    rel_deviation: float


class MpCheckRow(BaseModel):
    lam: float
    density_integral: float
    inverse_moment_quadrature: float
    inverse_moment_closed_form: float


class TheoryResponse(BaseModel):
    rows: list[ErrorNormRow]
    mp_rows: list[MpCheckRow]
    csv_text: str
    mp_csv_text: str
