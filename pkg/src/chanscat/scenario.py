"""Declarative scenarios, derived-quantity manifests, scans and sweeps.

Scenario files are flat ``key = value`` text with dotted section keys
(``particle.E_MeV``, ``laser.omega0_eV``, ...) and ``#`` comments; the full
grammar is documented in the README.  Identical scenarios produce
bit-identical CSV: floats are rendered with 17 significant digits in
scientific notation and row order is fixed by the grid order.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, replace

from . import __version__
from .channel import (
    ChannelModel,
    ParticleState,
    builtin_presets,
    lindhard_angle,
    max_level,
    oscillator_frequency,
    particle_from_total_energy,
)
from .emission import ScanGrid, SpectralPoint, mean_velocity, spectrum_scan
from .errors import ConfigError, DomainError
from .laser import (
    Detuning,
    LaserWave,
    ValidityReport,
    check_validity,
    detuning,
    doppler_shifted_frequency,
    dress,
)
from .units import ELECTRON_MASS_EV

_SPECIES = {"positron": +1, "electron": -1}

CSV_COLUMNS = (
    "N",
    "s0",
    "s",
    "theta_rad",
    "phi_rad",
    "omega_eV",
    "dW",
    "intensity",
    "valid",
    "note",
)

SWEEP_COLUMNS = (
    "axis",
    "value",
    "gamma",
    "Omega_eV",
    "omega_tilde0_eV",
    "delta0",
    "resonance_param_sq",
    "peak_omega_eV",
    "peak_dW",
    "total_dW",
    "n_points",
    "n_valid",
    "validity",
    "note",
)


def fmt(x: float) -> str:
    """17-significant-digit scientific notation; bit-stable float round trip."""
    return format(float(x), ".16e")


@dataclass(frozen=True)
class Scenario:
    """Fully resolved scenario; every field defaulted except E, omega0, xi."""

    species: str = "positron"
    E_MeV: float = math.nan
    s0: int = 0
    p_y_eV: float = 0.0
    preset: str = "si-planar"
    U0_eV: float = math.nan          # nan -> take from preset
    d_angstrom: float = math.nan
    n_index: float = math.nan
    harmonic_ok: bool = False
    omega0_eV: float = math.nan
    xi: float = math.nan
    theta_rad: tuple[float, ...] = ()
    phi_rad: tuple[float, ...] = ()
    N_list: tuple[int, ...] | None = None   # None -> auto (1..N_max); () is explicit empty
    delta_s_list: tuple[int, ...] = (-2, -1, 0, 1, 2)
    pass_ratio: float = 0.1
    warn_ratio: float = 0.5
    resonance_threshold: float = 0.2
    quad_tol: float = 1e-11
    n_max_margin: float = 0.1


_DEFAULT_THETA = "0:0.01:11"   # radians, forward cone
_DEFAULT_PHI = "0"


def _parse_grid(text: str) -> tuple[float, ...]:
    """Grid spec: ``a:b:n`` (n equally spaced points, inclusive) or a comma list."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ConfigError(f"grid spec {text!r}: expected 'start:stop:count'")
        a, b, n = float(parts[0]), float(parts[1]), int(parts[2])
        if n < 1:
            raise ConfigError(f"grid spec {text!r}: count must be >= 1")
        if n == 1:
            return (a,)
        step = (b - a) / (n - 1)
        return tuple(a + i * step for i in range(n))
    return tuple(float(v) for v in text.split(",") if v.strip() != "")


def _parse_int_list(text: str) -> tuple[int, ...]:
    return tuple(int(v) for v in text.split(",") if v.strip() != "")


def _require_monotone(name: str, grid: tuple[float, ...]) -> None:
    if len(grid) == 0:
        raise ConfigError(f"{name}: grid must be non-empty")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ConfigError(f"{name}: grid must be strictly increasing")


def parse_scenario_text(text: str, overrides: list[str] | None = None) -> Scenario:
    """Parse scenario file content plus ``key=value`` overrides (last wins)."""
    pairs: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"scenario line {lineno}: expected 'key = value'")
        key, _, value = line.partition("=")
        pairs[key.strip()] = value.strip()
    for item in overrides or []:
        if "=" not in item:
            raise ConfigError(f"override {item!r}: expected 'key=value'")
        key, _, value = item.partition("=")
        pairs[key.strip()] = value.strip()
    return scenario_from_pairs(pairs)


def scenario_from_pairs(pairs: dict[str, str]) -> Scenario:
    known = {
        "particle.species",
        "particle.E_MeV",
        "particle.s0",
        "particle.p_y_eV",
        "channel.preset",
        "channel.U0_eV",
        "channel.d_angstrom",
        "channel.n_index",
        "channel.harmonic_ok",
        "laser.omega0_eV",
        "laser.xi",
        "scan.theta_rad",
        "scan.phi_rad",
        "scan.N",
        "scan.delta_s",
        "tolerances.pass_ratio",
        "tolerances.warn_ratio",
        "tolerances.resonance_threshold",
        "tolerances.quad_tol",
        "tolerances.n_max_margin",
    }
    unknown = set(pairs) - known
    if unknown:
        raise ConfigError(f"unknown scenario key(s): {sorted(unknown)}")

    def get(key: str, default: str | None = None) -> str:
        if key in pairs:
            return pairs[key]
        if default is None:
            raise ConfigError(f"{key} required")
        return default

    def get_float(key: str, default: str | None = None) -> float:
        value = get(key, default)
        try:
            return float(value)
        except ValueError as exc:
            raise ConfigError(f"{key}: bad number {value!r}") from exc

    species = get("particle.species", "positron").lower()
    if species not in _SPECIES:
        raise ConfigError(f"particle.species must be one of {sorted(_SPECIES)}")
    harmonic_raw = get("channel.harmonic_ok", "false").lower()
    if harmonic_raw not in ("true", "false"):
        raise ConfigError("channel.harmonic_ok must be true or false")

    n_raw = get("scan.N", "auto").strip().lower()
    n_list = None if n_raw == "auto" else _parse_int_list(n_raw)
    if n_list and any(n < 1 for n in n_list):
        raise ConfigError("scan.N: resonant photon numbers must be >= 1")

    scn = Scenario(
        species=species,
        E_MeV=get_float("particle.E_MeV"),
        s0=int(get("particle.s0", "0")),
        p_y_eV=get_float("particle.p_y_eV", "0"),
        preset=get("channel.preset", "si-planar"),
        U0_eV=get_float("channel.U0_eV", "nan"),
        d_angstrom=get_float("channel.d_angstrom", "nan"),
        n_index=get_float("channel.n_index", "nan"),
        harmonic_ok=harmonic_raw == "true",
        omega0_eV=get_float("laser.omega0_eV"),
        xi=get_float("laser.xi"),
        theta_rad=_parse_grid(get("scan.theta_rad", _DEFAULT_THETA)),
        phi_rad=_parse_grid(get("scan.phi_rad", _DEFAULT_PHI)),
        N_list=n_list,
        delta_s_list=_parse_int_list(get("scan.delta_s", "-2,-1,0,1,2")),
        pass_ratio=get_float("tolerances.pass_ratio", "0.1"),
        warn_ratio=get_float("tolerances.warn_ratio", "0.5"),
        resonance_threshold=get_float("tolerances.resonance_threshold", "0.2"),
        quad_tol=get_float("tolerances.quad_tol", "1e-11"),
        n_max_margin=get_float("tolerances.n_max_margin", "0.1"),
    )
    if scn.E_MeV <= 0 or math.isnan(scn.E_MeV):
        raise ConfigError("particle.E_MeV must be positive")
    if scn.s0 < 0:
        raise ConfigError("particle.s0 must be >= 0")
    _require_monotone("scan.theta_rad", scn.theta_rad)
    _require_monotone("scan.phi_rad", scn.phi_rad)
    if len(scn.delta_s_list) == 0:
        raise ConfigError("scan.delta_s: list must be non-empty")
    return scn


@dataclass(frozen=True)
class ResolvedInputs:
    """Physics objects a scenario resolves to."""

    channel: ChannelModel
    particle: ParticleState
    wave: LaserWave
    Omega: float
    N_list: tuple[int, ...]


@dataclass(frozen=True)
class RunManifest:
    """Everything needed to reproduce a run: resolved scenario echo, derived
    quantities, validity report, library version and timestamp."""

    scenario: Scenario
    derived: dict[str, float]
    validity: ValidityReport
    version: str = __version__
    timestamp: str = ""

    def to_text(self) -> str:
        lines = [f"meta.version = {self.version}", f"meta.timestamp = {self.timestamp}"]
        for key, value in scenario_echo_pairs(self.scenario):
            lines.append(f"scenario.{key} = {value}")
        for key in sorted(self.derived):
            lines.append(f"derived.{key} = {fmt(self.derived[key])}")
        for check in self.validity.conditions:
            lines.append(f"validity.{check.name}.ratio = {fmt(check.ratio)}")
            lines.append(f"validity.{check.name}.verdict = {check.verdict}")
        lines.append(f"validity.overall = {self.validity.verdict}")
        return "\n".join(lines) + "\n"


def scenario_echo_pairs(scn: Scenario) -> list[tuple[str, str]]:
    """Canonical echo: all defaults materialized, grids as explicit lists.

    Feeding these lines back through the parser reproduces the identical
    resolved scenario (bit-exact floats via the 17-digit format).
    """
    return [
        ("particle.species", scn.species),
        ("particle.E_MeV", fmt(scn.E_MeV)),
        ("particle.s0", str(scn.s0)),
        ("particle.p_y_eV", fmt(scn.p_y_eV)),
        ("channel.preset", scn.preset),
        ("channel.U0_eV", fmt(scn.U0_eV)),
        ("channel.d_angstrom", fmt(scn.d_angstrom)),
        ("channel.n_index", fmt(scn.n_index)),
        ("channel.harmonic_ok", "true" if scn.harmonic_ok else "false"),
        ("laser.omega0_eV", fmt(scn.omega0_eV)),
        ("laser.xi", fmt(scn.xi)),
        ("scan.theta_rad", ",".join(fmt(v) for v in scn.theta_rad)),
        ("scan.phi_rad", ",".join(fmt(v) for v in scn.phi_rad)),
        ("scan.N", "auto" if scn.N_list is None else ",".join(str(n) for n in scn.N_list)),
        ("scan.delta_s", ",".join(str(d) for d in scn.delta_s_list)),
        ("tolerances.pass_ratio", fmt(scn.pass_ratio)),
        ("tolerances.warn_ratio", fmt(scn.warn_ratio)),
        ("tolerances.resonance_threshold", fmt(scn.resonance_threshold)),
        ("tolerances.quad_tol", fmt(scn.quad_tol)),
        ("tolerances.n_max_margin", fmt(scn.n_max_margin)),
    ]


def resolve_inputs(scn: Scenario) -> ResolvedInputs:
    """Materialize channel, particle and wave; explicit values beat the preset."""
    presets = builtin_presets()
    if scn.preset != "custom" and scn.preset not in presets:
        raise ConfigError(
            f"unknown channel preset {scn.preset!r}; available: {sorted(presets)} or 'custom'"
        )
    base = presets.get(scn.preset, {})
    u0 = scn.U0_eV if not math.isnan(scn.U0_eV) else base.get("U0_eV")
    d_ang = scn.d_angstrom if not math.isnan(scn.d_angstrom) else base.get("d_angstrom")
    n_idx = scn.n_index if not math.isnan(scn.n_index) else base.get("n_index")
    if u0 is None or d_ang is None or n_idx is None:
        raise ConfigError(
            "channel.U0_eV, channel.d_angstrom and channel.n_index all required "
            "when channel.preset = custom"
        )
    try:
        ch = ChannelModel.from_lab_units(U0_eV=u0, d_angstrom=d_ang, n_index=n_idx)
        particle = particle_from_total_energy(
            ch,
            mass=ELECTRON_MASS_EV,
            charge_sign=_SPECIES[scn.species],
            E=scn.E_MeV * 1e6,
            s0=scn.s0,
            p_y=scn.p_y_eV,
            harmonic_ok=scn.harmonic_ok,
        )
        wave = LaserWave(omega0=scn.omega0_eV, xi=scn.xi, n_index=n_idx)
    except DomainError as exc:
        raise ConfigError(str(exc)) from exc
    omega = oscillator_frequency(ch, particle)
    if scn.N_list is not None:
        n_list = scn.N_list
    else:
        n_max = math.floor(scn.n_max_margin * ch.U0 / wave.omega0)
        n_list = tuple(range(1, max(n_max, 1) + 1))
    return ResolvedInputs(channel=ch, particle=particle, wave=wave, Omega=omega, N_list=n_list)


def derive(scn: Scenario) -> RunManifest:
    """Compute every derived quantity once; the scan reuses them."""
    inputs = resolve_inputs(scn)
    ch, p, w = inputs.channel, inputs.particle, inputs.wave
    omega = inputs.Omega
    om_t0 = doppler_shifted_frequency(p, w)
    delta0 = detuning(om_t0, omega)
    ds0 = dress(p, w, omega)
    vel = mean_velocity(ds0)
    doppler_forward = (1.0 + w.n_index * vel.v_z) / (1.0 - vel.v_z)
    n_top = max(inputs.N_list, default=0)
    max_ds = max(abs(d) for d in scn.delta_s_list)
    omega_prime = omega / (1.0 + w.n_index * vel.v_z)
    omega_max = doppler_forward * (n_top * w.omega0 + omega_prime * max_ds)
    validity = check_validity(
        p,
        w,
        ch,
        n_top,
        omega_max,
        pass_threshold=scn.pass_ratio,
        warn_threshold=scn.warn_ratio,
    )
    # pre-scan estimate: recoil shifts the final detuning only at O(omega/E)
    regime = Detuning(
        delta=delta0, delta_final=delta0, threshold=scn.resonance_threshold
    )
    derived = {
        "gamma": p.gamma,
        "E_parallel_eV": p.E_parallel,
        "E_perp_eV": p.E_perp,
        "p_z_eV": p.p_z,
        "Omega_eV": omega,
        "omega_tilde0_eV": om_t0,
        "delta0": delta0,
        "theta_L_rad": lindhard_angle(ch, p),
        "s_max": float(max_level(ch, p)),
        "N_max": float(n_top),
        "resonance_param_sq": (w.xi / (2.0 * delta0)) ** 2 if delta0 != 0 else math.inf,
        "resonance_regime": 1.0 if regime.in_resonance_regime else 0.0,
        "mean_v_z": vel.v_z,
        "doppler_forward": doppler_forward,
        "omega_max_eV": omega_max,
        "U0_eV": ch.U0,
        "kappa_eV3": ch.kappa,
    }
    ts = time.strftime("%Y-%m-%dT%H:%M:%S%z")
    return RunManifest(scenario=scn, derived=derived, validity=validity, timestamp=ts)


def run_scan(scn: Scenario, *, threads: int = 1) -> tuple[RunManifest, list[SpectralPoint]]:
    manifest = derive(scn)
    inputs = resolve_inputs(scn)
    ds0 = dress(inputs.particle, inputs.wave, inputs.Omega)
    grid = ScanGrid(
        N_list=inputs.N_list,
        delta_s_list=scn.delta_s_list,
        thetas=scn.theta_rad,
        phis=scn.phi_rad,
        s0=scn.s0,
    )
    points = spectrum_scan(ds0, inputs.wave, grid, quad_tol=scn.quad_tol, threads=threads)
    return manifest, points


def points_to_csv(points: list[SpectralPoint]) -> str:
    lines = [",".join(CSV_COLUMNS)]
    for pt in points:
        lines.append(
            ",".join(
                (
                    str(pt.N),
                    str(pt.s0),
                    str(pt.s),
                    fmt(pt.geometry.theta),
                    fmt(pt.geometry.phi),
                    fmt(pt.omega),
                    fmt(pt.dW),
                    fmt(pt.intensity),
                    "true" if pt.valid else "false",
                    pt.note,
                )
            )
        )
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class ScanSummary:
    n_points: int
    n_valid: int
    peak_omega_eV: float
    peak_omega_N: int
    peak_dW: float
    peak_dW_omega_eV: float
    total_dW: float
    validity: str

    def to_dict(self) -> dict[str, float | int | str]:
        return {
            "n_points": self.n_points,
            "n_valid": self.n_valid,
            "peak_omega_eV": self.peak_omega_eV,
            "peak_omega_N": self.peak_omega_N,
            "peak_dW": self.peak_dW,
            "peak_dW_omega_eV": self.peak_dW_omega_eV,
            "total_dW": self.total_dW,
            "validity": self.validity,
        }


def summarize(points: list[SpectralPoint], validity_verdict: str) -> ScanSummary:
    valid = [pt for pt in points if pt.valid]
    if valid:
        peak_om_pt = max(valid, key=lambda pt: pt.omega)
        peak_dw_pt = max(valid, key=lambda pt: pt.dW)
        total = sum(pt.dW for pt in valid)
    else:
        peak_om_pt = peak_dw_pt = None
        total = 0.0
    return ScanSummary(
        n_points=len(points),
        n_valid=len(valid),
        peak_omega_eV=peak_om_pt.omega if peak_om_pt else 0.0,
        peak_omega_N=peak_om_pt.N if peak_om_pt else 0,
        peak_dW=peak_dw_pt.dW if peak_dw_pt else 0.0,
        peak_dW_omega_eV=peak_dw_pt.omega if peak_dw_pt else 0.0,
        total_dW=total,
        validity=validity_verdict,
    )


SWEEP_AXES = ("xi", "delta0", "E")


def _scenario_for_axis_value(scn: Scenario, axis: str, value: float) -> Scenario:
    if axis == "xi":
        return replace(scn, xi=value)
    if axis == "E":
        return replace(scn, E_MeV=value)
    if axis == "delta0":
        # pick omega0 so the initial Doppler-shifted frequency sits at
        # Omega (1 + delta0); channel/particle do not depend on the laser
        inputs = resolve_inputs(replace(scn, omega0_eV=1.0))
        p = inputs.particle
        ratio = (p.E + inputs.wave.n_index * p.p_z) / p.E_parallel
        omega0 = inputs.Omega * (1.0 + value) / ratio
        return replace(scn, omega0_eV=omega0)
    raise ConfigError(f"sweep axis must be one of {SWEEP_AXES}, got {axis!r}")


def sweep(
    scn: Scenario, axis: str, values: list[float], *, threads: int = 1
) -> tuple[list[dict[str, object]], str]:
    """One summary row per axis value; per-value failures become flagged rows.

    Returns (rows, csv_text).
    """
    if axis not in SWEEP_AXES:
        raise ConfigError(f"sweep axis must be one of {SWEEP_AXES}, got {axis!r}")
    rows: list[dict[str, object]] = []
    for value in values:
        if not math.isfinite(value) or (axis in ("xi", "E") and value <= 0):
            rows.append(_sweep_error_row(axis, value, "non-physical axis value"))
            continue
        try:
            sub = _scenario_for_axis_value(scn, axis, value)
            manifest, points = run_scan(sub, threads=threads)
            summary = summarize(points, manifest.validity.verdict)
            rows.append(
                {
                    "axis": axis,
                    "value": value,
                    "gamma": manifest.derived["gamma"],
                    "Omega_eV": manifest.derived["Omega_eV"],
                    "omega_tilde0_eV": manifest.derived["omega_tilde0_eV"],
                    "delta0": manifest.derived["delta0"],
                    "resonance_param_sq": manifest.derived["resonance_param_sq"],
                    "peak_omega_eV": summary.peak_omega_eV,
                    "peak_dW": summary.peak_dW,
                    "total_dW": summary.total_dW,
                    "n_points": summary.n_points,
                    "n_valid": summary.n_valid,
                    "validity": summary.validity,
                    "note": "",
                }
            )
        except Exception as exc:  # per-value failures must not abort the sweep
            rows.append(_sweep_error_row(axis, value, f"error:{type(exc).__name__}"))
    return rows, sweep_rows_to_csv(rows)


def _sweep_error_row(axis: str, value: float, note: str) -> dict[str, object]:
    row: dict[str, object] = {name: "" for name in SWEEP_COLUMNS}
    row.update({"axis": axis, "value": value, "validity": "error", "note": note})
    return row


def sweep_rows_to_csv(rows: list[dict[str, object]]) -> str:
    lines = [",".join(SWEEP_COLUMNS)]
    for row in rows:
        cells = []
        for name in SWEEP_COLUMNS:
            value = row.get(name, "")
            if isinstance(value, bool):
                cells.append("true" if value else "false")
            elif isinstance(value, float):
                cells.append(fmt(value))
            else:
                cells.append(str(value))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"
