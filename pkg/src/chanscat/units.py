"""Natural-unit (hbar = c = 1) quantities and eV <-> SI conversions.

Everything in the package is expressed on the eV scale: energies, momenta
and frequencies in eV, lengths and times in 1/eV.  Charge follows the
Gaussian convention, so e^2 equals the fine-structure constant; the
radiation prefactor consumes ``E_SQUARED`` directly.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .errors import DimensionError, DomainError

# CODATA values on the eV scale
ELECTRON_MASS_EV = 510_998.95
FINE_STRUCTURE = 7.297_352_5693e-3
HBAR_C_EV_NM = 197.326_980          # eV nm
HBAR_EV_S = 6.582_119_569e-16       # eV s
EV_IN_JOULE = 1.602_176_634e-19

# Gaussian natural units: e^2 = alpha (single source of truth)
E_SQUARED = FINE_STRUCTURE


class Dimension(enum.Enum):
    ENERGY = "energy"                  # eV
    INVERSE_ENERGY = "inverse_energy"  # 1/eV (length or time)
    DIMENSIONLESS = "dimensionless"


# closure of the product table over the three supported dimensions
_MUL = {
    (Dimension.ENERGY, Dimension.INVERSE_ENERGY): Dimension.DIMENSIONLESS,
    (Dimension.INVERSE_ENERGY, Dimension.ENERGY): Dimension.DIMENSIONLESS,
    (Dimension.ENERGY, Dimension.DIMENSIONLESS): Dimension.ENERGY,
    (Dimension.DIMENSIONLESS, Dimension.ENERGY): Dimension.ENERGY,
    (Dimension.INVERSE_ENERGY, Dimension.DIMENSIONLESS): Dimension.INVERSE_ENERGY,
    (Dimension.DIMENSIONLESS, Dimension.INVERSE_ENERGY): Dimension.INVERSE_ENERGY,
    (Dimension.DIMENSIONLESS, Dimension.DIMENSIONLESS): Dimension.DIMENSIONLESS,
}

_INVERSE = {
    Dimension.ENERGY: Dimension.INVERSE_ENERGY,
    Dimension.INVERSE_ENERGY: Dimension.ENERGY,
    Dimension.DIMENSIONLESS: Dimension.DIMENSIONLESS,
}


@dataclass(frozen=True)
class Quantity:
    """A value tagged with one of the three supported dimensions.

    Used at the package boundary (ingesting SI numbers, sanity checks);
    the computational core works on bare floats in canonical eV units.
    """

    value: float
    dimension: Dimension

    def __add__(self, other: "Quantity") -> "Quantity":
        self._require_same(other, "add")
        return Quantity(self.value + other.value, self.dimension)

    def __sub__(self, other: "Quantity") -> "Quantity":
        self._require_same(other, "subtract")
        return Quantity(self.value - other.value, self.dimension)

    def __mul__(self, other: "Quantity | float | int") -> "Quantity":
        if isinstance(other, (int, float)):
            return Quantity(self.value * other, self.dimension)
        key = (self.dimension, other.dimension)
        if key not in _MUL:
            raise DimensionError(
                f"cannot multiply {self.dimension.value} by {other.dimension.value}; "
                "only the energy/inverse-energy/dimensionless closure is supported"
            )
        return Quantity(self.value * other.value, _MUL[key])

    __rmul__ = __mul__

    def __truediv__(self, other: "Quantity | float | int") -> "Quantity":
        if isinstance(other, (int, float)):
            return Quantity(self.value / other, self.dimension)
        inv = Quantity(1.0 / other.value, _INVERSE[other.dimension])
        return self * inv

    def _require_same(self, other: "Quantity", op: str) -> None:
        if not isinstance(other, Quantity):
            raise DimensionError(f"cannot {op} Quantity and {type(other).__name__}")
        if other.dimension is not self.dimension:
            raise DimensionError(
                f"cannot {op} {self.dimension.value} and {other.dimension.value}"
            )


def energy(value_ev: float) -> Quantity:
    return Quantity(value_ev, Dimension.ENERGY)


def inverse_energy(value: float) -> Quantity:
    return Quantity(value, Dimension.INVERSE_ENERGY)


def dimensionless(value: float) -> Quantity:
    return Quantity(value, Dimension.DIMENSIONLESS)


def angular_frequency_to_energy(omega_rad_per_s: float) -> float:
    """hbar * omega: lab angular frequency [rad/s] -> photon/level energy [eV]."""
    if omega_rad_per_s <= 0:
        raise DomainError(f"angular frequency must be positive, got {omega_rad_per_s}")
    return HBAR_EV_S * omega_rad_per_s


def energy_to_angular_frequency(energy_ev: float) -> float:
    if energy_ev <= 0:
        raise DomainError(f"energy must be positive, got {energy_ev}")
    return energy_ev / HBAR_EV_S


def nm_to_inverse_ev(length_nm: float) -> float:
    """Length in nm -> natural units [1/eV] via hbar*c."""
    return length_nm / HBAR_C_EV_NM


def inverse_ev_to_nm(length_inv_ev: float) -> float:
    return length_inv_ev * HBAR_C_EV_NM


def angstrom_to_inverse_ev(length_angstrom: float) -> float:
    return nm_to_inverse_ev(0.1 * length_angstrom)


def ev_to_joule(energy_ev: float) -> float:
    return energy_ev * EV_IN_JOULE


def joule_to_ev(energy_j: float) -> float:
    return energy_j / EV_IN_JOULE


def lorentz_gamma(energy_ev: float, mass_ev: float) -> float:
    """gamma = E/m for a particle of total energy E and rest mass m."""
    if mass_ev <= 0:
        raise DomainError(f"mass must be positive, got {mass_ev}")
    if energy_ev < mass_ev:
        raise DomainError(
            f"total energy {energy_ev} eV below rest mass {mass_ev} eV"
        )
    return energy_ev / mass_ev
