"""HTTP service exposing sweeps, validation, quantizer and power reports.

The service owns no physics: request models are translated into the core
package's spec objects, executed, and returned either as JSON or as the
canonical CSV text (the same bytes the CLI writes to disk).  Long-lived
deployments run it under uvicorn; the CLI mounts the app in-process through
an ASGI transport, so both paths exercise the same wire format.
"""
from __future__ import annotations

import math
from dataclasses import replace

from fastapi import FastAPI, HTTPException, Query
from fastapi.responses import PlainTextResponse
from pydantic import BaseModel, Field

from . import __version__
from .experiments import (
    SWEEP_KINDS,
    make_spec,
    result_to_csv,
    run_sweep,
    spec_from_metadata,
)
from .power import PowerParams, total_power
from .quantization import distortion_factor
from .scenario import SystemConfig
from .validation import run_validation

__all__ = ["create_app"]


class QuantizerRow(BaseModel):
    b: int
    rho: float
    alpha: float


class QuantizerTableResponse(BaseModel):
    rows: list[QuantizerRow]


class PowerOverrides(BaseModel):
    """Component constants at the I/O boundary: milliwatts and femtojoules."""

    p_lo_mw: float | None = None
    p_lna_mw: float | None = None
    p_h_mw: float | None = None
    p_m_mw: float | None = None
    p_agc_mw: float | None = None
    p_bb_mw: float | None = None
    fom_w_fj: float | None = None
    f_s_hz: float | None = None

    def to_params(self) -> PowerParams:
        base = PowerParams()
        kwargs = {}
        for mw_key, w_key in (
            ("p_lo_mw", "p_lo_w"),
            ("p_lna_mw", "p_lna_w"),
            ("p_h_mw", "p_h_w"),
            ("p_m_mw", "p_m_w"),
            ("p_agc_mw", "p_agc_w"),
            ("p_bb_mw", "p_bb_w"),
        ):
            value = getattr(self, mw_key)
            if value is not None:
                kwargs[w_key] = value * 1e-3
        if self.fom_w_fj is not None:
            kwargs["fom_w_j_per_step"] = self.fom_w_fj * 1e-15
        if self.f_s_hz is not None:
            kwargs["f_s_hz"] = self.f_s_hz
        return PowerParams(**{**base.__dict__, **kwargs})


class PowerReportRequest(BaseModel):
    M: int = Field(ge=1)
    M0: int = Field(ge=0)
    b: int = Field(ge=1, le=12)
    b_high: int = 12
    power: PowerOverrides = Field(default_factory=PowerOverrides)


class PowerReportResponse(BaseModel):
    M: int
    M0: int
    M1: int
    b: int
    b_high: int
    components_mw: dict[str, float]
    total_mw: float
    total_w: float


class GeometryOverrides(BaseModel):
    cell_radius_m: float | None = None
    min_distance_m: float | None = None
    pathloss_exponent: float | None = None
    shadowing_std_db: float | None = None


class CaseModel(BaseModel):
    label: str
    M: int | None = None
    M0: int | None = None
    kappa: float | None = None
    b: int | None = None
    K_db: float | None = None
    csi: str | None = None


class SweepRequest(BaseModel):
    """Sweep inputs; unset fields fall back to the kind's figure recipe.

    ``replay_metadata`` replays a previously emitted CSV header instead of a
    fresh kind/override combination.
    """

    kind: str | None = None
    axis_values: list[float] | None = None
    cases: list[CaseModel] | None = None
    methods: list[str] | None = None
    csi: str | None = None
    M: int | None = None
    N: int | None = None
    b: int | None = None
    K_db: float | None = None
    pu_db: float | None = None
    tau: int | None = None
    E_u_db: float | None = None
    d_over_lambda: float | None = None
    W_hz: float | None = None
    b_high: int | None = None
    normalized_beta: bool | None = None
    redraw_users_per_point: bool | None = None
    seed: int | None = None
    realizations: int | None = None
    workers: int | None = None
    ci_level: float | None = None
    geometry: GeometryOverrides | None = None
    power: PowerOverrides | None = None
    replay_metadata: dict[str, str] | None = None


class SweepResponse(BaseModel):
    metadata: dict[str, str]
    rows: list[dict]


class ValidateRequest(BaseModel):
    seed: int = 20240801
    quick: bool = False


class ValidationCheckModel(BaseModel):
    name: str
    passed: bool
    measured: float
    tolerance: float
    detail: str


class ValidationResponse(BaseModel):
    passed: bool
    checks: list[ValidationCheckModel]


def _request_to_spec(request: SweepRequest):
    if request.replay_metadata is not None:
        spec = spec_from_metadata(request.replay_metadata)
        if request.workers:
            spec = replace(spec, mc=replace(spec.mc, workers=request.workers))
        return spec
    overrides = request.model_dump(exclude_none=True, exclude={"kind", "geometry", "power", "replay_metadata"})
    if "axis_values" in overrides:
        overrides["axis_values"] = tuple(overrides["axis_values"])
    if "cases" in overrides:
        overrides["cases"] = [
            {k: v for k, v in case.items() if v is not None} for case in overrides["cases"]
        ]
    if "methods" in overrides:
        overrides["methods"] = tuple(overrides["methods"])
    if request.geometry is not None:
        overrides.update(request.geometry.model_dump(exclude_none=True))
    if request.power is not None:
        power = request.power.to_params()
        defaults = PowerParams()
        for key, value in power.__dict__.items():
            if value != getattr(defaults, key):
                overrides[key] = value
    return make_spec(request.kind, **overrides)


def _json_cell(value):
    if isinstance(value, float) and not math.isfinite(value):
        return repr(value)
    return value


def create_app() -> FastAPI:
    """Build the service; stateless, so one app instance serves any client."""
    app = FastAPI(title="mixadc", version=__version__)

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok", "version": __version__}

    @app.get("/quantizer-table", response_model=QuantizerTableResponse)
    def quantizer_table(b_min: int = Query(1, ge=1), b_max: int = Query(12, le=12)) -> QuantizerTableResponse:
        if b_min > b_max:
            raise HTTPException(status_code=422, detail="b_min must not exceed b_max")
        rows = [
            QuantizerRow(b=b, rho=distortion_factor(b), alpha=1.0 - distortion_factor(b))
            for b in range(b_min, b_max + 1)
        ]
        return QuantizerTableResponse(rows=rows)

    @app.post("/power-report", response_model=PowerReportResponse)
    def power_report(request: PowerReportRequest) -> PowerReportResponse:
        try:
            config = SystemConfig(
                M=request.M, M0=request.M0, N=1, b=request.b, p_u=1.0, tau=1
            )
            breakdown = total_power(config, request.b_high, request.power.to_params())
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        components = {
            key: value * 1e3 for key, value in breakdown.as_dict().items() if key != "total_w"
        }
        return PowerReportResponse(
            M=request.M,
            M0=request.M0,
            M1=request.M - request.M0,
            b=request.b,
            b_high=request.b_high,
            components_mw={key.replace("_w", "_mw"): value for key, value in components.items()},
            total_mw=breakdown.total_w * 1e3,
            total_w=breakdown.total_w,
        )

    @app.post("/sweep")
    def sweep(request: SweepRequest, format: str = Query("csv", pattern="^(csv|json)$")):
        if request.replay_metadata is None and request.kind not in SWEEP_KINDS:
            raise HTTPException(
                status_code=422, detail=f"unknown sweep kind {request.kind!r}; expected one of {SWEEP_KINDS}"
            )
        try:
            spec = _request_to_spec(request)
            result = run_sweep(spec)
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        if format == "csv":
            return PlainTextResponse(result_to_csv(result), media_type="text/csv")
        rows = [{k: _json_cell(v) for k, v in row.items()} for row in result.rows]
        return SweepResponse(metadata=result.metadata, rows=rows)

    @app.post("/validate", response_model=ValidationResponse)
    def validate(request: ValidateRequest) -> ValidationResponse:
        report = run_validation(seed=request.seed, quick=request.quick)
        return ValidationResponse(
            passed=report.passed,
            checks=[ValidationCheckModel(**c.to_dict()) for c in report.checks],
        )

    return app
