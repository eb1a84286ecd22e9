"""Emitted-photon spectra for resonant multiphoton scattering of a strong
laser wave on planar-channeled relativistic particles."""

__version__ = "0.1.0"

from .channel import ChannelModel, ParticleState, channel_from_preset  # noqa: E402,F401
from .emission import (  # noqa: E402,F401
    EmissionChannel,
    EmissionGeometry,
    SpectralPoint,
    differential_probability,
    emitted_frequency,
    spectrum_scan,
)
from .laser import DressedState, LaserWave, check_validity, dress  # noqa: E402,F401
from .scenario import Scenario, derive, parse_scenario_text, run_scan, sweep  # noqa: E402,F401
from .specfun import LambdaArgs, bessel_j, lambda0_series, lambda_r  # noqa: E402,F401
