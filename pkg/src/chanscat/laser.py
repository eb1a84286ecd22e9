"""Laser wave, dressed (quasimomentum) states and applicability checks.

Geometry is fixed package-wide: the wave's vector potential points along x,
its phase is omega0 (t + n z), i.e. it propagates toward -z, and the particle
beam travels toward +z with p_z > 0.  Counter-propagation therefore maximizes
the Doppler-shifted frequency omega_tilde = (E + n p_z)/E_parallel * omega0.

Near resonance the detuning delta = (omega_tilde - Omega)/Omega is the
primary variable; the resonance denominator is always evaluated in the
factored form Delta = Omega^2 * delta * (2 + delta), which stays accurate
where the naive difference of squares would cancel catastrophically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .channel import ChannelModel, ParticleState, oscillator_frequency
from .errors import DomainError, PoleError

# wave polarization along x, propagation along -z (module-level geometry)
POLARIZATION_AXIS = "x"
PROPAGATION_AXIS = "-z"

RESONANCE_THRESHOLD_DEFAULT = 0.2


@dataclass(frozen=True)
class LaserWave:
    """Plane wave: photon energy omega0 [eV], intensity parameter xi = e A0 / m."""

    omega0: float
    xi: float
    n_index: float = 1.0

    def __post_init__(self):
        if self.omega0 <= 0:
            raise DomainError(f"omega0 must be positive, got {self.omega0}")
        if self.xi < 0:
            raise DomainError(f"xi must be >= 0, got {self.xi}")
        if self.n_index < 1.0:
            raise DomainError(f"refractive index must be >= 1, got {self.n_index}")

    def e2A02(self, mass: float) -> float:
        """e^2 A0^2 derived from xi (single source, no independent A0 field)."""
        return (self.xi * mass) ** 2


@dataclass(frozen=True)
class DressedState:
    """Quasienergy/quasimomentum of a particle dressed by the wave.

    Pi = E + W, Pi_z = p_z - n W, Pi_y = p_y with the intensity shift
    W = omega_tilde^2 e^2 A0^2 / (4 p_tilde Delta); Delta = omega_tilde^2 - Omega^2.
    Carries the underlying free state and detuning so downstream emission
    code can stay in the cancellation-safe variables.
    """

    Pi: float
    Pi_y: float
    Pi_z: float
    p_tilde: float
    omega_tilde: float
    Delta: float
    E: float
    p_z: float
    p_y: float
    E_parallel: float
    mass: float
    Omega: float
    delta: float


def p_tilde(p: ParticleState, w: LaserWave) -> float:
    return p.E + w.n_index * p.p_z


def doppler_shifted_frequency(p: ParticleState, w: LaserWave) -> float:
    """omega_tilde = (E + n p_z) / E_parallel * omega0."""
    return p_tilde(p, w) / p.E_parallel * w.omega0


def detuning(omega_tilde: float, Omega: float) -> float:
    """delta = (omega_tilde - Omega) / Omega."""
    if Omega <= 0:
        raise DomainError(f"Omega must be positive, got {Omega}")
    return (omega_tilde - Omega) / Omega


def resonance_denominator(Omega: float, delta: float) -> float:
    """Delta = omega_tilde^2 - Omega^2 in the factored form Omega^2 delta (2 + delta)."""
    return Omega * Omega * delta * (2.0 + delta)


@dataclass(frozen=True)
class Detuning:
    """Initial and final fractional detunings with a resonance-regime flag."""

    delta: float
    delta_final: float
    threshold: float = RESONANCE_THRESHOLD_DEFAULT

    @property
    def in_resonance_regime(self) -> bool:
        return abs(self.delta) < self.threshold and abs(self.delta_final) < self.threshold


def dress(p: ParticleState, w: LaserWave, Omega: float) -> DressedState:
    """Dressed state per the quasimomentum relations; xi -> 0 gives the free state."""
    om_t = doppler_shifted_frequency(p, w)
    delta = detuning(om_t, Omega)
    Delta = resonance_denominator(Omega, delta)
    if Delta == 0.0:
        raise PoleError(
            "dressing evaluated exactly on the resonance pole (Delta = 0); "
            "use detuned inputs"
        )
    pt = p_tilde(p, w)
    shift = om_t * om_t * w.e2A02(p.mass) / (4.0 * pt * Delta)
    return DressedState(
        Pi=p.E + shift,
        Pi_y=p.p_y,
        Pi_z=p.p_z - w.n_index * shift,
        p_tilde=pt,
        omega_tilde=om_t,
        Delta=Delta,
        E=p.E,
        p_z=p.p_z,
        p_y=p.p_y,
        E_parallel=p.E_parallel,
        mass=p.mass,
        Omega=Omega,
        delta=delta,
    )


# -- applicability conditions ------------------------------------------------

VERDICT_PASS = "pass"
VERDICT_WARN = "warn"
VERDICT_FAIL = "fail"


@dataclass(frozen=True)
class ConditionCheck:
    """One '<<' condition: ratio is small-is-good, margin = 1/ratio."""

    name: str
    description: str
    ratio: float
    verdict: str

    @property
    def margin(self) -> float:
        return math.inf if self.ratio == 0 else 1.0 / self.ratio


@dataclass(frozen=True)
class ValidityReport:
    conditions: tuple[ConditionCheck, ...]
    pass_threshold: float
    warn_threshold: float

    @property
    def verdict(self) -> str:
        worst = VERDICT_PASS
        for c in self.conditions:
            if c.verdict == VERDICT_FAIL:
                return VERDICT_FAIL
            if c.verdict == VERDICT_WARN:
                worst = VERDICT_WARN
        return worst

    def to_dict(self) -> dict[str, dict[str, float | str]]:
        return {
            c.name: {"ratio": c.ratio, "verdict": c.verdict} for c in self.conditions
        }

    def to_text(self) -> str:
        lines = ["applicability report"]
        width = max(len(c.name) for c in self.conditions)
        for c in self.conditions:
            lines.append(
                f"  {c.name:<{width}}  ratio={c.ratio:.3e}  margin={c.margin:.3e}"
                f"  [{c.verdict}]  {c.description}"
            )
        lines.append(f"  overall: {self.verdict}")
        return "\n".join(lines)


def _verdict(ratio: float, pass_threshold: float, warn_threshold: float) -> str:
    if ratio <= pass_threshold:
        return VERDICT_PASS
    if ratio <= warn_threshold:
        return VERDICT_WARN
    return VERDICT_FAIL


def check_validity(
    p: ParticleState,
    w: LaserWave,
    ch: ChannelModel,
    N_max: int,
    omega_max: float,
    *,
    pass_threshold: float = 0.1,
    warn_threshold: float = 0.5,
) -> ValidityReport:
    """Evaluate every '<<' applicability condition as a ratio with a verdict.

    Always returns a report; callers (CLI/service) decide whether a fail
    aborts the run.
    """
    gamma2 = p.gamma * p.gamma
    Omega = oscillator_frequency(ch, p)
    om_t0 = doppler_shifted_frequency(p, w)
    delta0 = detuning(om_t0, Omega)
    Delta0 = resonance_denominator(Omega, delta0)
    if Delta0 != 0.0:
        shift = abs(om_t0 * om_t0 * w.e2A02(p.mass) / (4.0 * p_tilde(p, w) * Delta0))
    else:
        shift = math.inf
    checks: list[tuple[str, str, float]] = [
        (
            "spin_effects",
            "spin terms negligible: E * E_perp / m^2 << 1",
            p.E * max(p.E_perp, 0.0) / (p.mass * p.mass),
        ),
        (
            "transverse_decoupling",
            "transverse motion leaves longitudinal motion intact: E_perp gamma^2 / E << 1",
            max(p.E_perp, 0.0) * gamma2 / p.E,
        ),
        (
            "transverse_kick",
            "wave-induced transverse energy change stays small: omega_max / E << 1",
            omega_max / p.E,
        ),
        (
            "total_energy_change",
            "total energy change small against initial energy: omega_max / E << 1",
            omega_max / p.E,
        ),
        (
            "resonance_detuning",
            "Doppler-shifted frequency near the channel frequency: |delta0| << 1",
            abs(delta0),
        ),
        (
            "dressing_shift",
            "intensity-induced quasimomentum shift is a small transverse-energy "
            "change: 2 gamma^2 (1+n) |W| / E << 1",
            2.0 * gamma2 * (1.0 + w.n_index) * shift / p.E,
        ),
        (
            "intensity_vs_detuning",
            "wave intensity dominates the detuning: |delta0| / xi << 1",
            abs(delta0) / w.xi if w.xi > 0 else math.inf,
        ),
        (
            "photon_budget",
            "absorbed photons below the dechanneling budget: N_max omega0 / U0 << 1",
            N_max * w.omega0 / ch.U0,
        ),
    ]
    conditions = tuple(
        ConditionCheck(name, desc, ratio, _verdict(ratio, pass_threshold, warn_threshold))
        for name, desc, ratio in checks
    )
    return ValidityReport(conditions, pass_threshold, warn_threshold)
