"""Emission kinematics and the resonant differential probability.

The emitted frequency follows the conservation-law closed form

    omega = (1 + n v_z) / (1 - k_hat . v) * [l omega0 + Omega' (s0 - s)],
    Omega' = Omega / (1 + n v_z),

with v the mean (quasimomentum) velocity of the dressed initial state.  With
Omega = 0 and n = 1 this is the free Compton formula for the scattered
frequency (quantum recoil neglected).  A negative return value marks a
kinematically forbidden channel; no exception is raised for it.

The resonant differential probability per unit d^3k is

    dW = m^2 e^2 / (2 pi omega omega0 Pi Pi') *
         [ -Lambda_0^2 + (xi / 2 delta0)^2 (Lambda_1^2 - Lambda_0 Lambda_2) ],

with Pi' = Pi + N omega0 - omega the final quasienergy, delta0 the initial
detuning, and Lambda_r evaluated at the phase amplitudes alpha, beta of the
emission kinematics.  alpha and beta are always computed in the factored
detuning form (cancellation-safe near resonance):

    Delta  = Omega^2 delta_f (2 + delta_f)
    Delta0 = Omega^2 delta_0 (2 + delta_0)
    omega_tilde0 * omega_tilde - Omega^2 = Omega^2 (delta_0 + delta_f + delta_0 delta_f)
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .errors import DomainError, KinematicsError, PoleError, ChanscatError
from .laser import DressedState, LaserWave, resonance_denominator
from .specfun import lambda_all
from .units import E_SQUARED

_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class EmissionGeometry:
    """Photon direction: polar angle from the +z beam axis, azimuth from the
    x axis (the polarization/oscillation plane)."""

    theta: float
    phi: float

    def k_hat(self) -> tuple[float, float, float]:
        st = math.sin(self.theta)
        return (st * math.cos(self.phi), st * math.sin(self.phi), math.cos(self.theta))

    def k_vector(self, omega: float) -> tuple[float, float, float]:
        kx, ky, kz = self.k_hat()
        return (omega * kx, omega * ky, omega * kz)

    def k_x(self, omega: float) -> float:
        return omega * math.sin(self.theta) * math.cos(self.phi)


@dataclass(frozen=True)
class EmissionChannel:
    """One partial process: harmonic index l (l > 0 absorption, l < 0
    emission into the wave) and the level transition s0 -> s.  In resonant
    flows the channel carries the net absorbed photon number N = l >= 1."""

    l: int
    s0: int
    s: int

    def __post_init__(self):
        if self.s0 < 0 or self.s < 0:
            raise DomainError(f"level indices must be >= 0, got s0={self.s0}, s={self.s}")

    @property
    def N(self) -> int:
        if self.l < 1:
            raise DomainError(f"resonant channel requires N >= 1, got l={self.l}")
        return self.l

    @classmethod
    def resonant(cls, N: int, s0: int, s: int) -> "EmissionChannel":
        if N < 1:
            raise DomainError(f"resonant channel requires N >= 1, got {N}")
        return cls(l=N, s0=s0, s=s)


@dataclass(frozen=True)
class SpectralPoint:
    """One scan sample; dW >= 0 whenever valid is True."""

    omega: float
    dW: float
    N: int
    geometry: EmissionGeometry
    valid: bool
    s0: int = 0
    s: int = 0
    delta_final: float = 0.0
    note: str = ""

    def __post_init__(self):
        if self.valid and self.dW < 0:
            raise DomainError("SpectralPoint with valid=True must have dW >= 0")

    @property
    def intensity(self) -> float:
        return self.omega * self.dW


@dataclass(frozen=True)
class MeanVelocity:
    v_y: float
    v_z: float

    @property
    def magnitude(self) -> float:
        return math.hypot(self.v_y, self.v_z)


def mean_velocity(ds: DressedState) -> MeanVelocity:
    """Mean longitudinal velocity of the dressed state, Pi_parallel / Pi."""
    if ds.Pi <= 0:
        raise DomainError(f"quasienergy must be positive, got {ds.Pi}")
    vel = MeanVelocity(v_y=ds.Pi_y / ds.Pi, v_z=ds.Pi_z / ds.Pi)
    if vel.magnitude >= 1.0:
        raise KinematicsError(f"mean velocity magnitude {vel.magnitude} >= 1")
    return vel


def emitted_frequency(
    ds0: DressedState,
    channel: EmissionChannel,
    geom: EmissionGeometry,
    *,
    n_index: float,
    omega0: float,
    Omega: float | None = None,
) -> float:
    """Closed-form emitted frequency for one channel and direction [eV].

    Omega defaults to the channel frequency carried by the dressed state;
    pass 0.0 for the free (Compton) limit.  A negative result marks the
    channel kinematically forbidden.
    """
    if Omega is None:
        Omega = ds0.Omega
    vel = mean_velocity(ds0)
    _, ky, kz = geom.k_hat()
    one_plus = 1.0 + n_index * vel.v_z
    denom = 1.0 - (ky * vel.v_y + kz * vel.v_z)
    omega_prime = Omega / one_plus
    bracket = channel.l * omega0 + omega_prime * (channel.s0 - channel.s)
    return one_plus / denom * bracket


def final_dressed(
    ds0: DressedState,
    w: LaserWave,
    N: int,
    omega: float,
    geom: EmissionGeometry,
    *,
    max_iter: int = 60,
) -> DressedState:
    """Post-emission dressed state from quasimomentum/quasienergy conservation.

    Pi' = Pi + N omega0 - omega, Pi_y' = Pi_y - k_y, Pi_z' = Pi_z - k_z - N n omega0
    (absorption of N wave photons, emission of one omega photon).  The
    underlying free momenta are recovered by a fixed-point pass on the
    intensity shift, which is tiny against E in the soft-photon regime.
    """
    _, ky, kz = geom.k_vector(omega)
    n = w.n_index
    pi_f = ds0.Pi + N * w.omega0 - omega
    pi_y_f = ds0.Pi_y - ky
    pi_z_f = ds0.Pi_z - kz - N * n * w.omega0
    if pi_f <= 0:
        raise KinematicsError(
            f"final quasienergy {pi_f} <= 0: emitted omega={omega} eV is outside "
            "the soft-photon regime"
        )
    m = ds0.mass
    Omega = ds0.Omega
    e2a02 = w.e2A02(m)
    shift = ds0.Pi - ds0.E
    e_f = p_z_f = e_par_f = om_t_f = delta_f = big_delta_f = pt_f = 0.0
    for _ in range(max_iter):
        e_f = pi_f - shift
        p_z_f = pi_z_f + n * shift
        e_par_f = math.hypot(p_z_f, m)
        pt_f = e_f + n * p_z_f
        om_t_f = pt_f / e_par_f * w.omega0
        delta_f = (om_t_f - Omega) / Omega
        big_delta_f = resonance_denominator(Omega, delta_f)
        if big_delta_f == 0.0:
            raise PoleError("final state lands exactly on the resonance pole")
        new_shift = om_t_f * om_t_f * e2a02 / (4.0 * pt_f * big_delta_f)
        if abs(new_shift - shift) <= 1e-13 * (1.0 + abs(new_shift)):
            shift = new_shift
            break
        shift = new_shift
    return DressedState(
        Pi=pi_f,
        Pi_y=pi_y_f,
        Pi_z=pi_z_f,
        p_tilde=pt_f,
        omega_tilde=om_t_f,
        Delta=big_delta_f,
        E=e_f,
        p_z=p_z_f,
        p_y=pi_y_f,
        E_parallel=e_par_f,
        mass=m,
        Omega=Omega,
        delta=delta_f,
    )


def alpha_beta(
    *,
    xi: float,
    mass: float,
    E_parallel: float,
    k_x: float,
    Omega: float,
    delta0: float,
    delta_f: float,
) -> tuple[float, float]:
    """Phase amplitudes (alpha, beta) in the cancellation-safe detuning form."""
    if delta0 == 0.0 or delta_f == 0.0:
        raise PoleError(
            "alpha/beta evaluated exactly on the resonance pole (delta = 0); "
            "use a finite detuning"
        )
    d0 = delta0 * (2.0 + delta0)
    df = delta_f * (2.0 + delta_f)
    cross = delta0 + delta_f + delta0 * delta_f
    omega_tilde0 = Omega * (1.0 + delta0)
    alpha = (
        xi * 2.0 * mass * k_x * omega_tilde0 * cross
        / (E_parallel * Omega * Omega * df * d0)
    )
    beta = (
        xi * xi * mass * mass * (delta0 - delta_f) * cross
        / (8.0 * E_parallel * Omega * df * d0)
    )
    return alpha, beta


def differential_probability(
    ds0: DressedState,
    w: LaserWave,
    channel: EmissionChannel,
    geom: EmissionGeometry,
    *,
    quad_tol: float = 1e-11,
) -> SpectralPoint:
    """Resonant one-photon differential probability per unit d^3k.

    Points with a negative multiphoton bracket (or a forbidden frequency)
    come back with valid=False and dW clamped to 0, never a silent negative.
    """
    N = channel.N
    omega = emitted_frequency(ds0, channel, geom, n_index=w.n_index, omega0=w.omega0)
    if omega <= 0.0:
        return SpectralPoint(
            omega=omega,
            dW=0.0,
            N=N,
            geometry=geom,
            valid=False,
            s0=channel.s0,
            s=channel.s,
            delta_final=0.0,
            note="kinematically_forbidden" if omega < 0.0 else "zero_frequency",
        )
    ds_f = final_dressed(ds0, w, N, omega, geom)
    a, b = alpha_beta(
        xi=w.xi,
        mass=ds0.mass,
        E_parallel=ds0.E_parallel,
        k_x=geom.k_x(omega),
        Omega=ds0.Omega,
        delta0=ds0.delta,
        delta_f=ds_f.delta,
    )
    l0, l1, l2 = lambda_all(N, a, b, tol=quad_tol)
    resonance_sq = (w.xi / (2.0 * ds0.delta)) ** 2
    bracket = -l0 * l0 + resonance_sq * (l1 * l1 - l0 * l2)
    prefactor = (
        ds0.mass * ds0.mass * E_SQUARED
        / (_TWO_PI * omega * w.omega0 * ds0.Pi * ds_f.Pi)
    )
    if bracket < 0.0:
        return SpectralPoint(
            omega=omega,
            dW=0.0,
            N=N,
            geometry=geom,
            valid=False,
            s0=channel.s0,
            s=channel.s,
            delta_final=ds_f.delta,
            note="negative_bracket",
        )
    return SpectralPoint(
        omega=omega,
        dW=prefactor * bracket,
        N=N,
        geometry=geom,
        valid=True,
        s0=channel.s0,
        s=channel.s,
        delta_final=ds_f.delta,
    )


@dataclass(frozen=True)
class ScanGrid:
    """Deterministic scan order: N, then level transition, then theta, then phi."""

    N_list: tuple[int, ...]
    delta_s_list: tuple[int, ...]
    thetas: tuple[float, ...]
    phis: tuple[float, ...]
    s0: int = 0

    def points(self) -> list[tuple[int, int, float, float]]:
        out = []
        for N in self.N_list:
            for d in self.delta_s_list:
                if self.s0 - d < 0:
                    continue  # transition below the ground state
                for th in self.thetas:
                    for ph in self.phis:
                        out.append((N, d, th, ph))
        return out


def spectrum_scan(
    ds0: DressedState,
    w: LaserWave,
    grid: ScanGrid,
    *,
    quad_tol: float = 1e-11,
    threads: int = 1,
) -> list[SpectralPoint]:
    """Evaluate the grid; per-point errors become flagged points, output order
    is the grid order regardless of thread count."""
    combos = grid.points()

    def evaluate(idx: int) -> SpectralPoint:
        N, d, th, ph = combos[idx]
        geom = EmissionGeometry(theta=th, phi=ph)
        channel = EmissionChannel.resonant(N=N, s0=grid.s0, s=grid.s0 - d)
        try:
            return differential_probability(ds0, w, channel, geom, quad_tol=quad_tol)
        except ChanscatError as exc:
            return SpectralPoint(
                omega=0.0,
                dW=0.0,
                N=N,
                geometry=geom,
                valid=False,
                s0=grid.s0,
                s=grid.s0 - d,
                delta_final=0.0,
                note=f"error:{type(exc).__name__}",
            )

    if threads <= 1 or len(combos) < 2:
        return [evaluate(i) for i in range(len(combos))]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(evaluate, range(len(combos))))
