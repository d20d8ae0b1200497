"""FastAPI application wiring the pipeline commands to endpoints.

Error contract: configuration problems return 422 with
``{"detail": {"kind": "config", ...}}``; runtime failures return 400 with
``kind: "runtime"``. The thin CLI client maps these to exit codes 2 and 1.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

import gwsc
from gwsc.errors import ConfigError, GwscError
from gwsc.service import commands
from gwsc.service.schemas import (
    BuildDataRequest,
    BuildDataResponse,
    EvaluateRequest,
    EvaluateResponse,
    FinetuneRequest,
    FinetuneResponse,
    GridRequest,
    GridResponse,
    HealthResponse,
    PredictRequest,
    PredictResponse,
)


def create_app() -> FastAPI:
    app = FastAPI(title="gwsc", version=gwsc.__version__)

    @app.exception_handler(ConfigError)
    async def _config_error(request: Request, exc: ConfigError):
        return JSONResponse(
            status_code=422, content={"detail": {"kind": "config", "message": str(exc)}}
        )

    @app.exception_handler(GwscError)
    async def _runtime_error(request: Request, exc: GwscError):
        return JSONResponse(
            status_code=400, content={"detail": {"kind": "runtime", "message": str(exc)}}
        )

    @app.exception_handler(FileNotFoundError)
    async def _missing_file(request: Request, exc: FileNotFoundError):
        return JSONResponse(
            status_code=400, content={"detail": {"kind": "runtime", "message": str(exc)}}
        )

    @app.get("/health", response_model=HealthResponse)
    def health():
        return HealthResponse(status="ok", version=gwsc.__version__)

    @app.post("/commands/build-data", response_model=BuildDataResponse)
    def build_data(req: BuildDataRequest):
        return commands.cmd_build_data(req)

    @app.post("/commands/finetune", response_model=FinetuneResponse)
    def finetune(req: FinetuneRequest):
        return commands.cmd_finetune(req)

    @app.post("/commands/predict", response_model=PredictResponse)
    def predict(req: PredictRequest):
        return commands.cmd_predict(req)

    @app.post("/commands/evaluate", response_model=EvaluateResponse)
    def evaluate(req: EvaluateRequest):
        return commands.cmd_evaluate(req)

    @app.post("/commands/grid", response_model=GridResponse)
    def grid(req: GridRequest):
        return commands.cmd_grid(req)

    return app
