"""Exception hierarchy shared across the package.

The CLI maps these onto its exit-code contract: config problems exit 1,
numeric failures exit 2, validity hard-fails exit 3.
"""

from __future__ import annotations


class ChanscatError(Exception):
    """Base class for all package errors."""


class ConfigError(ChanscatError):
    """Scenario/config input is malformed or incomplete."""


class DomainError(ChanscatError):
    """A physical input lies outside the operation's domain."""


class DimensionError(DomainError):
    """Dimension-checked arithmetic was asked to mix incompatible dimensions."""


class PoleError(DomainError):
    """Evaluation exactly on a resonance pole (delta = 0); use detuned inputs."""


class KinematicsError(DomainError):
    """Conservation laws produced an unphysical state (e.g. final quasienergy <= 0)."""


class NumericError(ChanscatError):
    """A numerical routine failed to reach the requested tolerance.

    ``achieved`` carries the error estimate actually reached, when known.
    """

    def __init__(self, message: str, achieved: float | None = None):
        super().__init__(message)
        self.achieved = achieved


class ValidityError(ChanscatError):
    """A scenario hard-failed the applicability conditions."""
