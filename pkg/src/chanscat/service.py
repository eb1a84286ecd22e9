"""HTTP service exposing the library; the CLI is a thin client of this app.

Error contract: config/domain problems -> 400 with error_kind "config",
numeric failures -> 422 with "numeric", validity hard-fails -> 409 with
"validity".  Clients map these onto the CLI exit codes 1/2/3.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from . import __version__
from .channel import builtin_presets
from .emission import EmissionChannel, EmissionGeometry, emitted_frequency, mean_velocity
from .errors import (
    ChanscatError,
    ConfigError,
    DomainError,
    NumericError,
    ValidityError,
)
from .laser import dress
from .scenario import (
    Scenario,
    derive,
    parse_scenario_text,
    points_to_csv,
    resolve_inputs,
    run_scan,
    scenario_from_pairs,
    summarize,
    sweep,
)
from .schemas import (
    ConditionModel,
    ErrorResponse,
    FrequencyRequest,
    FrequencyResponse,
    HealthResponse,
    LambdaRequest,
    LambdaResponse,
    PresetModel,
    PresetsResponse,
    ScanSummaryModel,
    ScenarioPayload,
    SpectrumRequest,
    SpectrumResponse,
    SweepRequest,
    SweepResponse,
    ValidateRequest,
    ValidateResponse,
)
from .specfun import LambdaArgs, lambda_r_quadrature, lambda_r_series

app = FastAPI(title="chanscat", version=__version__)


def _error_kind(exc: ChanscatError) -> tuple[str, int]:
    if isinstance(exc, NumericError):
        return "numeric", 422
    if isinstance(exc, ValidityError):
        return "validity", 409
    if isinstance(exc, (ConfigError, DomainError)):
        return "config", 400
    return "config", 400


@app.exception_handler(ChanscatError)
async def chanscat_error_handler(request: Request, exc: ChanscatError) -> JSONResponse:
    kind, status = _error_kind(exc)
    payload = ErrorResponse(error_kind=kind, message=str(exc))
    return JSONResponse(status_code=status, content=payload.model_dump())


def _parse_payload(payload: ScenarioPayload) -> Scenario:
    return parse_scenario_text(payload.text, payload.overrides)


@app.get("/health", response_model=HealthResponse)
def health() -> HealthResponse:
    return HealthResponse(status="ok", version=__version__)


@app.get("/presets", response_model=PresetsResponse)
def presets() -> PresetsResponse:
    table = builtin_presets()
    return PresetsResponse(
        presets={name: PresetModel(**props) for name, props in table.items()}
    )


@app.post("/lambda", response_model=LambdaResponse)
def lambda_endpoint(req: LambdaRequest) -> LambdaResponse:
    args = LambdaArgs(N=req.N, alpha=req.alpha, beta=req.beta, r=req.r)
    quad = series = difference = None
    nodes = None
    if req.method in ("quad", "both"):
        quad, nodes = lambda_r_quadrature(args, tol=req.tol)
    if req.method in ("series", "both"):
        series = lambda_r_series(args)
    if quad is not None and series is not None:
        difference = quad - series
    return LambdaResponse(quad=quad, series=series, difference=difference, nodes=nodes)


@app.post("/frequency", response_model=FrequencyResponse)
def frequency(req: FrequencyRequest) -> FrequencyResponse:
    pairs = {
        "particle.species": req.species,
        "particle.E_MeV": repr(req.E_MeV),
        "particle.s0": str(req.s0),
        "channel.preset": req.preset,
        "channel.harmonic_ok": "true" if req.harmonic_ok else "false",
        "laser.omega0_eV": repr(req.omega0_eV),
        "laser.xi": repr(req.xi),
    }
    if req.U0_eV is not None:
        pairs["channel.U0_eV"] = repr(req.U0_eV)
    if req.d_angstrom is not None:
        pairs["channel.d_angstrom"] = repr(req.d_angstrom)
    if req.n_index is not None:
        pairs["channel.n_index"] = repr(req.n_index)
    scn = scenario_from_pairs(pairs)
    inputs = resolve_inputs(scn)
    ds0 = dress(inputs.particle, inputs.wave, inputs.Omega)
    channel = EmissionChannel(l=req.l, s0=req.s0, s=req.s if req.s is not None else req.s0)
    geom = EmissionGeometry(theta=req.theta_rad, phi=req.phi_rad)
    omega_value = emitted_frequency(
        ds0,
        channel,
        geom,
        n_index=inputs.wave.n_index,
        omega0=inputs.wave.omega0,
        Omega=0.0 if req.compton_limit else None,
    )
    vel = mean_velocity(ds0)
    doppler = (1.0 + inputs.wave.n_index * vel.v_z) / (1.0 - vel.v_z)
    return FrequencyResponse(
        omega_eV=omega_value,
        forbidden=omega_value < 0.0,
        Omega_eV=inputs.Omega,
        doppler_forward=doppler,
        mean_v_z=vel.v_z,
        delta0=ds0.delta,
    )


@app.post("/validate", response_model=ValidateResponse)
def validate(req: ValidateRequest) -> ValidateResponse:
    scn = _parse_payload(req.scenario)
    manifest = derive(scn)
    report = manifest.validity
    return ValidateResponse(
        text=report.to_text(),
        conditions=[
            ConditionModel(
                name=c.name,
                description=c.description,
                ratio=c.ratio,
                margin=c.margin,
                verdict=c.verdict,
            )
            for c in report.conditions
        ],
        map=report.to_dict(),
        verdict=report.verdict,
    )


@app.post("/spectrum", response_model=SpectrumResponse)
def spectrum(req: SpectrumRequest) -> SpectrumResponse:
    scn = _parse_payload(req.scenario)
    manifest = derive(scn)
    if manifest.validity.verdict == "fail" and not req.force:
        failing = [c.name for c in manifest.validity.conditions if c.verdict == "fail"]
        raise ValidityError(
            f"applicability hard-fail on {failing}; re-run with force to proceed"
        )
    manifest, points = run_scan(scn, threads=req.threads)
    summary = summarize(points, manifest.validity.verdict)
    return SpectrumResponse(
        csv=points_to_csv(points),
        manifest=manifest.to_text(),
        summary=ScanSummaryModel(**summary.to_dict()),
    )


@app.post("/sweep", response_model=SweepResponse)
def sweep_endpoint(req: SweepRequest) -> SweepResponse:
    scn = _parse_payload(req.scenario)
    rows, csv_text = sweep(scn, req.axis, req.values, threads=req.threads)
    return SweepResponse(csv=csv_text, rows=rows)
