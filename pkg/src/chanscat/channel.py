"""Planar-channel model: harmonic interplanar potential and level spectrum.

The averaged potential between crystal planes is U(x) = kappa x^2 / 2 with
kappa = 2 U0 / d^2 (well depth U0, interplanar spacing d).  A particle with
longitudinal energy E_par oscillates at Omega = sqrt(kappa / E_par) and
occupies equally spaced transverse levels E_perp(s) = Omega (s + 1/2).
Quantum recoil is neglected throughout.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from importlib import resources

from .errors import ConfigError, DomainError
from .units import angstrom_to_inverse_ev

_KAPPA_TOL = 1e-9  # relative slack when validating a caller-supplied kappa


@dataclass(frozen=True)
class ChannelModel:
    """Crystal planar channel in natural units.

    U0 in eV, d in 1/eV (use :func:`from_lab_units` to feed Angstroms),
    kappa = 2 U0 / d^2 in eV^3, and the crystal refractive index at the
    laser frequency.
    """

    U0: float
    d: float
    kappa: float = field(default=0.0)
    refractive_index_n: float = 1.0

    def __post_init__(self):
        if self.U0 <= 0:
            raise DomainError(f"well depth U0 must be positive, got {self.U0}")
        if self.d <= 0:
            raise DomainError(f"interplanar spacing d must be positive, got {self.d}")
        if self.refractive_index_n < 1.0:
            raise DomainError(
                f"refractive index must be >= 1 (transparent crystal), got {self.refractive_index_n}"
            )
        exact = 2.0 * self.U0 / self.d**2
        if self.kappa == 0.0:
            object.__setattr__(self, "kappa", exact)
        elif abs(self.kappa - exact) > _KAPPA_TOL * exact:
            raise DomainError(
                f"kappa={self.kappa} inconsistent with 2*U0/d^2={exact}"
            )

    @classmethod
    def from_lab_units(
        cls, U0_eV: float, d_angstrom: float, n_index: float = 1.0
    ) -> "ChannelModel":
        return cls(U0=U0_eV, d=angstrom_to_inverse_ev(d_angstrom), refractive_index_n=n_index)


@dataclass(frozen=True)
class ParticleState:
    """Channeled particle: total energy, momentum split and transverse level.

    E_parallel = sqrt(p_z^2 + m^2) is the longitudinal-motion energy; the
    transverse remainder E - E_parallel >= 0 is bookkept as E_perp.
    """

    mass: float
    charge_sign: int
    E: float
    p_z: float
    p_y: float = 0.0
    s0: int = 0

    def __post_init__(self):
        if self.mass <= 0:
            raise DomainError(f"mass must be positive, got {self.mass}")
        if self.charge_sign not in (-1, 1):
            raise DomainError(f"charge_sign must be +1 or -1, got {self.charge_sign}")
        if self.s0 < 0:
            raise DomainError(f"level index s0 must be >= 0, got {self.s0}")
        # 1e-12 relative slack: E_parallel reconstructed via hypot can land a
        # few ulp above E for a purely longitudinal state
        if self.E < self.E_parallel * (1.0 - 1e-12):
            raise DomainError(
                f"total energy {self.E} below longitudinal energy {self.E_parallel}"
            )

    @property
    def E_parallel(self) -> float:
        return math.hypot(self.p_z, self.mass)

    @property
    def E_perp(self) -> float:
        return self.E - self.E_parallel

    @property
    def gamma(self) -> float:
        return self.E / self.mass


def oscillator_frequency(ch: ChannelModel, p: ParticleState) -> float:
    """Omega = sqrt(kappa / E_parallel) [eV]."""
    return math.sqrt(ch.kappa / p.E_parallel)


def level_energy(ch: ChannelModel, p: ParticleState, s: int) -> float:
    """Transverse level energy E_perp(s) = Omega (s + 1/2)."""
    if s < 0:
        raise DomainError(f"level index must be >= 0, got {s}")
    return oscillator_frequency(ch, p) * (s + 0.5)


def lindhard_angle(ch: ChannelModel, p: ParticleState) -> float:
    """Critical capture angle theta_L = sqrt(2 U0 / E) [rad]."""
    return math.sqrt(2.0 * ch.U0 / p.E)


def max_level(ch: ChannelModel, p: ParticleState) -> int:
    """Largest s with Omega (s + 1/2) <= U0, the <= taken with 1e-12 relative
    slack so exact-boundary inputs land on the mathematical value."""
    omega = oscillator_frequency(ch, p)
    if omega >= ch.U0:
        raise DomainError(
            f"no bound levels: Omega={omega} eV >= U0={ch.U0} eV"
        )
    return math.floor(ch.U0 / omega - 0.5 + 1e-12)


def particle_from_total_energy(
    ch: ChannelModel,
    *,
    mass: float,
    charge_sign: int,
    E: float,
    s0: int,
    p_y: float = 0.0,
    harmonic_ok: bool = False,
) -> ParticleState:
    """Build a channeled state from total energy and level index.

    E_parallel is solved self-consistently with E_perp = Omega(E_parallel)(s0+1/2);
    the transverse share is ~Omega/E so a few fixed-point sweeps reach machine
    precision.  Electrons ride the same harmonic model only with
    ``harmonic_ok`` acknowledged (the approximation is rough for them at
    moderate energies); otherwise a warning is emitted.
    """
    if charge_sign == -1 and not harmonic_ok:
        warnings.warn(
            "harmonic channel model applied to an electron; set harmonic_ok=true "
            "to acknowledge the approximation",
            UserWarning,
            stacklevel=2,
        )
    e_par = E
    for _ in range(50):
        omega = math.sqrt(ch.kappa / e_par)
        e_perp = omega * (s0 + 0.5) + (p_y * p_y) / (2.0 * e_par)
        e_par_new = E - e_perp
        if e_par_new <= mass:
            raise DomainError(
                f"transverse level s0={s0} leaves no longitudinal energy at E={E} eV"
            )
        if abs(e_par_new - e_par) <= 4.0 * math.ulp(e_par):
            e_par = e_par_new
            break
        e_par = e_par_new
    p_z = math.sqrt((e_par - mass) * (e_par + mass))
    return ParticleState(mass=mass, charge_sign=charge_sign, E=E, p_z=p_z, p_y=p_y, s0=s0)


def builtin_presets() -> dict[str, dict[str, float]]:
    """Channel presets shipped as data (implementation-supplied defaults)."""
    text = resources.files("chanscat").joinpath("data/presets.cfg").read_text()
    return parse_presets(text)


def parse_presets(text: str) -> dict[str, dict[str, float]]:
    """Parse a preset config: ``<name>.<key> = <value>`` lines, ``#`` comments.

    Keys per preset: U0_eV, d_angstrom, n_index.
    """
    presets: dict[str, dict[str, float]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"preset line {lineno}: expected 'name.key = value'")
        key, _, value = line.partition("=")
        key = key.strip()
        name, _, prop = key.rpartition(".")
        if not name or prop not in ("U0_eV", "d_angstrom", "n_index"):
            raise ConfigError(f"preset line {lineno}: unknown key {key!r}")
        try:
            presets.setdefault(name, {})[prop] = float(value.strip())
        except ValueError as exc:
            raise ConfigError(f"preset line {lineno}: bad number {value.strip()!r}") from exc
    for name, props in presets.items():
        missing = {"U0_eV", "d_angstrom", "n_index"} - props.keys()
        if missing:
            raise ConfigError(f"preset {name!r} missing keys: {sorted(missing)}")
    return presets


def channel_from_preset(name: str, presets: dict[str, dict[str, float]] | None = None) -> ChannelModel:
    table = presets if presets is not None else builtin_presets()
    if name not in table:
        raise ConfigError(f"unknown channel preset {name!r}; available: {sorted(table)}")
    props = table[name]
    return ChannelModel.from_lab_units(
        U0_eV=props["U0_eV"], d_angstrom=props["d_angstrom"], n_index=props["n_index"]
    )
