"""FastAPI service wrapping the core package.

All endpoints are stateless and pure given the request (including seeds),
so responses are reproducible.  Domain validation errors map to 400.
"""

from __future__ import annotations

import time

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..bench import exact_recovery, plot_data, records_to_csv, run_sweep, summary_table
from ..config import build_sweep_config, build_theory_config, parse_config_text
from ..instance import dumps_instance, generate_instance, loads_instance
from ..rng import DEFAULT_SEED, derive_seed
from ..solvers import RlsParams, omp, rawls, rls, rls_fixed_size
from ..theory import error_norm_csv, error_norm_table, mp_check_csv, mp_check_table
from .models import (
    BenchRequest,
    BenchResponse,
    GenerateRequest,
    GenerateResponse,
    HealthResponse,
    RecordModel,
    SolveRequest,
    SolveResponse,
    TheoryRequest,
    TheoryResponse,
)


def create_app() -> FastAPI:
    app = FastAPI(title="rlsbench", version=__version__)

    @app.exception_handler(ValueError)
    async def _value_error(request: Request, exc: ValueError):
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    @app.get("/health", response_model=HealthResponse)
    def health():
        return HealthResponse(status="ok", version=__version__)

    @app.post("/api/generate", response_model=GenerateResponse)
    def generate(req: GenerateRequest):
        seed = req.seed if req.seed is not None else DEFAULT_SEED
        inst = generate_instance(
            req.ensemble, req.n, req.d, req.k, req.sigma, seed, rho=req.rho
        )
        return GenerateResponse(
            instance_text=dumps_instance(inst),
            ensemble=inst.x.tag,
            n=inst.x.n,
            d=inst.x.d,
            k=inst.theta_star.k,
            sigma=inst.sigma,
            seed=inst.seed,
        )

    @app.post("/api/solve", response_model=SolveResponse)
    def solve(req: SolveRequest):
        inst = loads_instance(req.instance_text)
        opt = req.options
        k = opt.k if opt.k is not None else inst.theta_star.k
        seed = opt.seed if opt.seed is not None else derive_seed(inst.seed, "solve")
        x, y = inst.x.entries, inst.y
        start = time.perf_counter()
        if opt.solver == "rls":
            params = RlsParams(
                m=opt.m,
                frac_lo=opt.frac_lo,
                frac_hi=opt.frac_hi,
                votes=opt.votes,
                seed=seed,
                vote_scope=opt.vote_scope,
            )
            estimate = rls(x, y, k, params)
        elif opt.solver == "rawls":
            estimate = rawls(x, y, k, m=opt.m, seed=seed)
        elif opt.solver == "omp":
            estimate = omp(x, y, k)
        else:
            from ..bench import SolverSpec

            spec = SolverSpec.parse(opt.solver)
            estimate = rls_fixed_size(x, y, k, n0=spec.n0, m=spec.m, seed=seed)
        wall = time.perf_counter() - start
        set_ok, signed_ok = exact_recovery(inst.theta_star, estimate)
        return SolveResponse(
            solver=opt.solver,
            support=list(estimate.entries),
            true_support=[int(i) for i in inst.theta_star.support],
            set_match=set_ok,
            signed_match=signed_ok,
            wall_seconds=wall,
        )

    @app.post("/api/bench", response_model=BenchResponse)
    def bench(req: BenchRequest):
        raw = parse_config_text(req.config_text)
        raw.update(req.overrides)
        config = build_sweep_config(raw)
        records = run_sweep(config, threads=req.threads)
        return BenchResponse(
            csv_text=records_to_csv(records),
            records=[RecordModel(**vars(r)) for r in records],
            summary=summary_table(records),
            plot_files=plot_data(records) if req.plot_data else {},
        )

    @app.post("/api/theory", response_model=TheoryResponse)
    def theory(req: TheoryRequest):
        cfg = build_theory_config(
            {
                "D": str(req.d),
                "N": ",".join(str(n) for n in req.n_values),
                "trials": str(req.trials),
                "seed": str(req.seed if req.seed is not None else DEFAULT_SEED),
            }
        )
        rows = error_norm_table(cfg["d"], cfg["n_values"], cfg["trials"], cfg["seed"])
        mp_rows = mp_check_table()
        return TheoryResponse(
            rows=rows,
            mp_rows=mp_rows,
            csv_text=error_norm_csv(rows),
            mp_csv_text=mp_check_csv(mp_rows),
        )

    return app


app = create_app()
