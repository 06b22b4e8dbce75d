"""JSON-over-HTTP inference service.

POST /predict   parameters -> contour + features + warnings
GET  /ranges    supported parameter and dimensionless input ranges
GET  /health    loaded model metadata

Malformed bodies give 400 with field diagnostics; strict-mode range
violations give 422; a layer mode with no loaded model gives 503.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .exceptions import DomainError, ValidationError
from .network import TrainedModel
from .params import INPUT_BOUNDS, PARAM_BOUNDS, PrintParams
from .pipeline import predict_response
from .printability import RheologyExtras

PARAM_UNITS = {
    "rho": "kg/m^3", "mu": "Pa.s", "tau0": "Pa", "phi_n": "mm",
    "h_n": "mm", "v_p": "mm/s", "u_f": "mm/s",
}
INPUT_UNITS = {
    "tau0_star": "-", "mu": "Pa.s", "phi_n": "mm", "h_n": "mm", "v_star": "-",
}


class ParamsBody(BaseModel, extra="forbid"):
    rho: float = Field(gt=0)
    mu: float = Field(gt=0)
    tau0: float = Field(gt=0)
    phi_n: float = Field(gt=0)
    h_n: float = Field(gt=0)
    v_p: float = Field(gt=0)
    u_f: float = Field(gt=0)


class ExtrasBody(BaseModel, extra="forbid"):
    G: float | None = Field(default=None, gt=0)
    xi: float = 1.5
    r_c_ratio: float = 0.85


class PredictBody(BaseModel, extra="forbid"):
    layers: int = Field(ge=1, le=2)
    params: ParamsBody
    extras: ExtrasBody | None = None
    n_points: int | None = Field(default=None, ge=4, le=4096)
    mode: str = Field(default="warn", pattern="^(warn|strict)$")


def create_app(models: dict[int, TrainedModel]) -> FastAPI:
    """Build the service around pre-loaded models keyed by layer mode."""
    if not models:
        raise DomainError("at least one model is required")

    app = FastAPI(title="beadshape", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"],
        allow_headers=["*"])

    @app.exception_handler(RequestValidationError)
    async def bad_request(request: Request, exc: RequestValidationError):
        details = [
            {"field": ".".join(str(p) for p in err["loc"] if p != "body"),
             "message": err["msg"]}
            for err in exc.errors()
        ]
        return JSONResponse(status_code=400,
                            content={"error": "malformed request",
                                     "details": details})

    @app.exception_handler(ValidationError)
    async def out_of_range(request: Request, exc: ValidationError):
        return JSONResponse(
            status_code=422,
            content={"error": "inputs out of supported range",
                     "details": [
                         {"field": v.field, "message": v.message()}
                         for v in exc.violations]})

    @app.exception_handler(DomainError)
    async def domain_error(request: Request, exc: DomainError):
        return JSONResponse(status_code=400, content={"error": str(exc)})

    @app.get("/health")
    async def health():
        return {
            "status": "ok",
            "models": {
                str(mode): {
                    "layers": m.layers,
                    "n_harmonics": m.config.n_harmonics,
                    "best_epoch": m.best_epoch,
                    "best_validation_error": m.best_validation_error,
                }
                for mode, m in sorted(models.items())
            },
        }

    @app.get("/ranges")
    async def ranges():
        return {
            "parameters": {
                k: {"lo": lo, "hi": hi, "unit": PARAM_UNITS[k]}
                for k, (lo, hi) in PARAM_BOUNDS.items()},
            "inputs": {
                k: {"lo": lo, "hi": hi, "unit": INPUT_UNITS[k]}
                for k, (lo, hi) in INPUT_BOUNDS.items()},
        }

    @app.post("/predict")
    async def predict(body: PredictBody):
        model = models.get(body.layers)
        if model is None:
            return JSONResponse(
                status_code=503,
                content={"error": f"no model loaded for layers={body.layers}"})
        params = PrintParams.from_dict(body.params.model_dump())
        extras = None
        if body.extras is not None:
            extras = RheologyExtras(**body.extras.model_dump())
        return predict_response(model, params, extras=extras,
                                n_points=body.n_points, mode=body.mode)

    return app
