"""Pydantic request/response models for the HTTP service."""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, Field


class HealthResponse(BaseModel):
    status: str
    version: str


class ErrorResponse(BaseModel):
    error_kind: Literal["config", "numeric", "validity"]
    message: str


class LambdaRequest(BaseModel):
    r: int = Field(default=0, ge=0, le=2)
    N: int = 0
    alpha: float = 0.0
    beta: float = 0.0
    method: Literal["quad", "series", "both"] = "quad"
    tol: float = Field(default=1e-11, gt=0)


class LambdaResponse(BaseModel):
    quad: float | None = None
    series: float | None = None
    difference: float | None = None
    nodes: int | None = None


class FrequencyRequest(BaseModel):
    E_MeV: float = Field(gt=0)
    species: Literal["positron", "electron"] = "positron"
    s0: int = Field(default=0, ge=0)
    preset: str = "si-planar"
    U0_eV: float | None = None
    d_angstrom: float | None = None
    n_index: float | None = None
    harmonic_ok: bool = False
    omega0_eV: float = Field(gt=0)
    xi: float = Field(default=0.0, ge=0)
    l: int = 1
    s: int | None = None
    theta_rad: float = 0.0
    phi_rad: float = 0.0
    compton_limit: bool = False  # evaluate with the channel frequency forced to 0


class FrequencyResponse(BaseModel):
    omega_eV: float
    forbidden: bool
    Omega_eV: float
    doppler_forward: float
    mean_v_z: float
    delta0: float


class ScenarioPayload(BaseModel):
    """Scenario file content plus key=value overrides (last wins)."""

    text: str = ""
    overrides: list[str] = Field(default_factory=list)


class ScanSummaryModel(BaseModel):
    n_points: int
    n_valid: int
    peak_omega_eV: float
    peak_omega_N: int
    peak_dW: float
    peak_dW_omega_eV: float
    total_dW: float
    validity: str


class SpectrumRequest(BaseModel):
    scenario: ScenarioPayload
    force: bool = False
    threads: int = Field(default=1, ge=1, le=64)


class SpectrumResponse(BaseModel):
    csv: str
    manifest: str
    summary: ScanSummaryModel


class SweepRequest(BaseModel):
    scenario: ScenarioPayload
    axis: Literal["xi", "delta0", "E"]
    values: list[float]
    threads: int = Field(default=1, ge=1, le=64)


class SweepResponse(BaseModel):
    csv: str
    rows: list[dict[str, object]]


class ValidateRequest(BaseModel):
    scenario: ScenarioPayload


class ConditionModel(BaseModel):
    name: str
    description: str
    ratio: float
    margin: float
    verdict: str


class ValidateResponse(BaseModel):
    text: str
    conditions: list[ConditionModel]
    map: dict[str, dict[str, float | str]]
    verdict: str


class PresetModel(BaseModel):
    U0_eV: float
    d_angstrom: float
    n_index: float


class PresetsResponse(BaseModel):
    presets: dict[str, PresetModel]
