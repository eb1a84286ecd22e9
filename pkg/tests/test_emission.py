"""Emission kinematics, resonant differential probability, scan driver."""

import math

import numpy as np
import pytest

from chanscat.channel import ParticleState
from chanscat.emission import (
    EmissionChannel,
    EmissionGeometry,
    ScanGrid,
    alpha_beta,
    differential_probability,
    emitted_frequency,
    final_dressed,
    mean_velocity,
    spectrum_scan,
)
from chanscat.errors import DomainError, PoleError
from chanscat.laser import LaserWave, dress
from chanscat.units import ELECTRON_MASS_EV

# free 50 MeV kinematics, frozen from direct arithmetic
V_Z_50MEV = 0.9999477746508763
DOPPLER_50MEV = 38294.579322237674            # (1+v)/(1-v)
OMEGA_FWD_BRACKET20 = 765891.5864447535       # 20 eV bracket, forward


def free_particle(E=50e6, p_y=0.0):
    p_z = math.sqrt((E - ELECTRON_MASS_EV) * (E + ELECTRON_MASS_EV))
    return ParticleState(mass=ELECTRON_MASS_EV, charge_sign=+1, E=E, p_z=p_z, p_y=p_y)


def wave_at_detuning(p, Omega, delta0, xi, n_index=1.0):
    ratio = (p.E + n_index * p.p_z) / p.E_parallel
    return LaserWave(omega0=Omega * (1.0 + delta0) / ratio, xi=xi, n_index=n_index)


def dressed_state(E=50e6, Omega=0.9192427981307479, delta0=0.05, xi=0.1):
    p = free_particle(E)
    w = wave_at_detuning(p, Omega, delta0, xi)
    return dress(p, w, Omega), w


# -- mean velocity ---------------------------------------------------------------


def test_mean_velocity_free_limit():
    ds, _ = dressed_state(xi=0.0)
    vel = mean_velocity(ds)
    assert vel.v_y == 0.0
    assert vel.v_z == pytest.approx(V_Z_50MEV, rel=1e-14)
    assert vel.magnitude < 1.0


def test_mean_velocity_decreases_with_intensity_above_resonance():
    previous = None
    for xi in (0.0, 0.1, 0.3, 0.5):
        ds, _ = dressed_state(delta0=0.05, xi=xi)  # Delta > 0
        v_z = mean_velocity(ds).v_z
        if previous is not None:
            assert v_z < previous
        previous = v_z


# -- emitted frequency -----------------------------------------------------------


def test_emitted_frequency_zero_exchange():
    ds, w = dressed_state(xi=0.0)
    channel = EmissionChannel(l=0, s0=3, s=3)
    geom = EmissionGeometry(theta=0.3, phi=1.0)
    assert emitted_frequency(ds, channel, geom, n_index=1.0, omega0=w.omega0) == 0.0


def test_emitted_frequency_compton_forward_anchor():
    # Omega = 0, n = 1, s0 = s: free Compton formula; 20 eV bracket forward
    p = free_particle()
    w = LaserWave(omega0=20.0, xi=0.0, n_index=1.0)
    ds = dress(p, w, Omega=1.0)  # xi = 0: dressing trivial, Omega only labels
    channel = EmissionChannel(l=1, s0=0, s=0)
    geom = EmissionGeometry(theta=0.0, phi=0.0)
    omega = emitted_frequency(ds, channel, geom, n_index=1.0, omega0=20.0, Omega=0.0)
    assert omega == pytest.approx(OMEGA_FWD_BRACKET20, rel=1e-12)
    assert omega / 20.0 == pytest.approx(DOPPLER_50MEV, rel=1e-12)


def test_emitted_frequency_compton_random_kinematics():
    rng = np.random.default_rng(99)
    for _ in range(250):
        gamma = math.exp(rng.uniform(math.log(2.0), math.log(2e4)))
        p = free_particle(E=gamma * ELECTRON_MASS_EV)
        omega0 = rng.uniform(0.1, 5.0)
        w = LaserWave(omega0=omega0, xi=0.0, n_index=1.0)
        ds = dress(p, w, Omega=7.0)
        ell = int(rng.integers(1, 6))
        theta = rng.uniform(0.0, math.pi)
        phi = rng.uniform(0.0, 2.0 * math.pi)
        got = emitted_frequency(
            ds,
            EmissionChannel(l=ell, s0=0, s=0),
            EmissionGeometry(theta=theta, phi=phi),
            n_index=1.0,
            omega0=omega0,
            Omega=0.0,
        )
        v = p.p_z / p.E
        oracle = ell * omega0 * (1.0 + v) / (1.0 - v * math.cos(theta))
        assert got == pytest.approx(oracle, rel=1e-12)


def test_emitted_frequency_additivity_in_bracket():
    ds, w = dressed_state()
    geom = EmissionGeometry(theta=0.004, phi=0.7)
    kwargs = dict(n_index=1.0, omega0=w.omega0)
    for ell in (-2, 0, 1, 3):
        for s0, s in ((4, 2), (2, 4), (3, 3)):
            full = emitted_frequency(ds, EmissionChannel(l=ell, s0=s0, s=s), geom, **kwargs)
            ell_only = emitted_frequency(ds, EmissionChannel(l=ell, s0=0, s=0), geom, **kwargs)
            level_only = emitted_frequency(ds, EmissionChannel(l=0, s0=s0, s=s), geom, **kwargs)
            assert full == pytest.approx(ell_only + level_only, rel=1e-12, abs=1e-15)


def test_emitted_frequency_negative_marks_forbidden():
    # emission into the wave with no level energy to pay for it
    ds, w = dressed_state(xi=0.0)
    geom = EmissionGeometry(theta=0.0, phi=0.0)
    omega = emitted_frequency(
        ds, EmissionChannel(l=-1, s0=0, s=0), geom, n_index=1.0, omega0=w.omega0
    )
    assert omega < 0.0


def test_emitted_frequency_forward_is_maximal():
    ds, w = dressed_state()
    channel = EmissionChannel(l=3, s0=0, s=0)
    omegas = [
        emitted_frequency(
            ds, channel, EmissionGeometry(theta=th, phi=0.0), n_index=1.0, omega0=w.omega0
        )
        for th in np.linspace(0.0, 0.03, 40)
    ]
    assert np.argmax(omegas) == 0


# -- alpha, beta -----------------------------------------------------------------


def raw_alpha_beta(xi, m, e_par, k_x, Omega, delta0, delta_f):
    """Independent oracle: the defining expressions with naive differences."""
    om0 = Omega * (1.0 + delta0)
    omf = Omega * (1.0 + delta_f)
    d_big0 = om0 * om0 - Omega * Omega
    d_bigf = omf * omf - Omega * Omega
    cross = om0 * omf - Omega * Omega
    alpha = xi * 2.0 * m * k_x * om0 * cross / (e_par * d_bigf * d_big0)
    beta = xi * xi * m * m * (om0 - omf) * cross / (8.0 * e_par * d_bigf * d_big0)
    return alpha, beta


def test_alpha_zero_when_kx_zero():
    a, b = alpha_beta(
        xi=0.3, mass=ELECTRON_MASS_EV, E_parallel=5e7, k_x=0.0, Omega=0.9,
        delta0=0.05, delta_f=0.048,
    )
    assert a == 0.0
    assert b != 0.0


def test_beta_zero_when_detunings_equal():
    a, b = alpha_beta(
        xi=0.3, mass=ELECTRON_MASS_EV, E_parallel=5e7, k_x=100.0, Omega=0.9,
        delta0=0.05, delta_f=0.05,
    )
    assert b == 0.0
    assert a != 0.0


def test_alpha_beta_pole_error():
    with pytest.raises(PoleError):
        alpha_beta(
            xi=0.3, mass=ELECTRON_MASS_EV, E_parallel=5e7, k_x=100.0, Omega=0.9,
            delta0=0.0, delta_f=0.05,
        )


def test_alpha_beta_factored_matches_raw():
    rng = np.random.default_rng(17)
    for _ in range(300):
        delta0 = float(rng.choice([-1, 1])) * 10 ** rng.uniform(-3, -0.7)
        delta_f = delta0 * (1.0 + rng.uniform(-0.2, 0.2))
        kwargs = dict(
            xi=float(rng.uniform(0.01, 1.0)),
            m=ELECTRON_MASS_EV,
            e_par=float(10 ** rng.uniform(7, 9)),
            k_x=float(rng.uniform(-5e3, 5e3)),
            Omega=float(rng.uniform(0.1, 2.0)),
            delta0=delta0,
            delta_f=delta_f,
        )
        a_raw, b_raw = raw_alpha_beta(**kwargs)
        a_fac, b_fac = alpha_beta(
            xi=kwargs["xi"], mass=kwargs["m"], E_parallel=kwargs["e_par"],
            k_x=kwargs["k_x"], Omega=kwargs["Omega"],
            delta0=kwargs["delta0"], delta_f=kwargs["delta_f"],
        )
        assert a_fac == pytest.approx(a_raw, rel=1e-9)
        assert b_fac == pytest.approx(b_raw, rel=1e-9, abs=1e-300)


def test_alpha_beta_factored_finite_at_tiny_detuning():
    for delta in (1e-6, -1e-6):
        a, b = alpha_beta(
            xi=0.3, mass=ELECTRON_MASS_EV, E_parallel=5e7, k_x=100.0, Omega=0.9,
            delta0=delta, delta_f=delta * 1.1,
        )
        assert math.isfinite(a) and math.isfinite(b)
    # alpha scales as 1/delta near the pole: alpha * delta is locally flat
    prods = []
    for delta in (1e-6, 2e-6):
        a, _ = alpha_beta(
            xi=0.3, mass=ELECTRON_MASS_EV, E_parallel=5e7, k_x=100.0, Omega=0.9,
            delta0=delta, delta_f=delta,
        )
        prods.append(a * delta)
    assert prods[0] == pytest.approx(prods[1], rel=1e-3)


# -- final state and differential probability ------------------------------------


def test_final_dressed_conservation():
    ds, w = dressed_state(xi=0.2)
    geom = EmissionGeometry(theta=0.002, phi=0.4)
    N = 3
    omega = emitted_frequency(
        ds, EmissionChannel(l=N, s0=0, s=0), geom, n_index=w.n_index, omega0=w.omega0
    )
    ds_f = final_dressed(ds, w, N, omega, geom)
    _, ky, kz = geom.k_vector(omega)
    assert ds_f.Pi == pytest.approx(ds.Pi + N * w.omega0 - omega, rel=1e-14)
    assert ds_f.Pi_y == pytest.approx(ds.Pi_y - ky, rel=1e-14, abs=1e-12)
    assert ds_f.Pi_z == pytest.approx(ds.Pi_z - kz - N * w.n_index * w.omega0, rel=1e-14)
    # recovered free state satisfies the dressing relations self-consistently
    shift = ds_f.omega_tilde**2 * w.e2A02(ds.mass) / (4.0 * ds_f.p_tilde * ds_f.Delta)
    assert ds_f.Pi - ds_f.E == pytest.approx(shift, rel=1e-10)
    assert ds_f.E_parallel == pytest.approx(math.hypot(ds_f.p_z, ds.mass), rel=1e-15)
    # final detuning stays close to the initial one in the soft-photon regime
    assert ds_f.delta == pytest.approx(ds.delta, rel=5e-2)


def test_differential_probability_reference_point():
    ds, w = dressed_state(xi=0.3, delta0=0.01)
    point = differential_probability(
        ds, w, EmissionChannel.resonant(N=1, s0=0, s=0), EmissionGeometry(0.001, 0.0)
    )
    assert point.valid and point.dW > 0.0
    assert point.intensity == point.omega * point.dW
    # (xi/2 delta)^2 = 225 dominates, so the N=1 bracket is positive
    assert point.omega > 0.0


def test_differential_probability_weak_field_invalid():
    # xi/2delta << 1 puts the formula outside its regime: bracket < 0
    ds, w = dressed_state(xi=1e-3, delta0=0.1)
    point = differential_probability(
        ds, w, EmissionChannel.resonant(N=1, s0=0, s=0), EmissionGeometry(0.005, 0.0)
    )
    assert not point.valid
    assert point.dW == 0.0
    assert point.note == "negative_bracket"


def test_differential_probability_small_alpha_expansion():
    # N=1 bracket ~ -alpha^2/4 + (xi/2d)^2 (1/4 - alpha^2/8) from the J-series
    from chanscat.specfun import lambda_all

    ds, w = dressed_state(xi=0.3, delta0=0.01)
    geom = EmissionGeometry(theta=2e-6, phi=0.0)
    omega = emitted_frequency(
        ds, EmissionChannel(l=1, s0=0, s=0), geom, n_index=1.0, omega0=w.omega0
    )
    ds_f = final_dressed(ds, w, 1, omega, geom)
    a, b = alpha_beta(
        xi=w.xi, mass=ds.mass, E_parallel=ds.E_parallel, k_x=geom.k_x(omega),
        Omega=ds.Omega, delta0=ds.delta, delta_f=ds_f.delta,
    )
    assert abs(a) < 0.05 and abs(b) < 1e-4
    l0, l1, l2 = lambda_all(1, a, b)
    g = (w.xi / (2.0 * ds.delta)) ** 2
    bracket = -l0 * l0 + g * (l1 * l1 - l0 * l2)
    expansion = -a * a / 4.0 + g * (0.25 - a * a / 8.0)
    assert bracket == pytest.approx(expansion, rel=1e-3)


def test_differential_probability_phi_reflection_symmetric():
    ds, w = dressed_state(xi=0.3, delta0=0.02)
    channel = EmissionChannel.resonant(N=2, s0=1, s=1)
    for phi in (0.3, 1.2, 2.9):
        up = differential_probability(ds, w, channel, EmissionGeometry(0.003, phi))
        down = differential_probability(ds, w, channel, EmissionGeometry(0.003, -phi))
        assert up.dW == down.dW
        assert up.omega == down.omega


def test_differential_probability_theta_zero_general_path():
    # degenerate forward geometry: k_x = 0 so alpha = 0 exactly, same code path
    ds, w = dressed_state(xi=0.3, delta0=0.01)
    point = differential_probability(
        ds, w, EmissionChannel.resonant(N=1, s0=0, s=0), EmissionGeometry(0.0, 0.0)
    )
    assert point.valid
    assert point.geometry.k_x(point.omega) == 0.0
    assert point.dW > 0.0


def test_positivity_bookkeeping_random():
    # delta0 > 0 keeps the dressed velocity subluminal at these intensities
    rng = np.random.default_rng(31)
    silent_negatives = 0
    for _ in range(300):
        delta0 = float(10 ** rng.uniform(-2.3, -1.3))
        xi = delta0 * 2.0 * rng.uniform(10.0, 40.0)
        ds, w = dressed_state(delta0=delta0, xi=xi)
        point = differential_probability(
            ds,
            w,
            EmissionChannel.resonant(N=int(rng.integers(1, 4)), s0=0, s=0),
            EmissionGeometry(float(10 ** rng.uniform(-8, -4)), float(rng.uniform(0, 2 * math.pi))),
        )
        if point.dW < 0:
            silent_negatives += 1
        assert point.valid or point.dW == 0.0
    assert silent_negatives == 0


def test_spectral_point_invariant():
    with pytest.raises(DomainError):
        from chanscat.emission import SpectralPoint

        SpectralPoint(
            omega=1.0, dW=-1.0, N=1, geometry=EmissionGeometry(0, 0), valid=True
        )


# -- scan driver -----------------------------------------------------------------


def test_scan_empty_n_list():
    ds, w = dressed_state()
    grid = ScanGrid(N_list=(), delta_s_list=(0,), thetas=(0.0,), phis=(0.0,))
    assert spectrum_scan(ds, w, grid) == []


def test_scan_single_point_matches_direct_call():
    ds, w = dressed_state(xi=0.3, delta0=0.01)
    grid = ScanGrid(N_list=(1,), delta_s_list=(0,), thetas=(0.002,), phis=(0.5,))
    points = spectrum_scan(ds, w, grid)
    direct = differential_probability(
        ds, w, EmissionChannel.resonant(N=1, s0=0, s=0), EmissionGeometry(0.002, 0.5)
    )
    assert len(points) == 1
    assert points[0] == direct


def test_scan_order_and_transition_filter():
    ds, w = dressed_state()
    grid = ScanGrid(
        N_list=(1, 2), delta_s_list=(-1, 0, 1), thetas=(0.0, 0.001), phis=(0.0,), s0=0
    )
    points = spectrum_scan(ds, w, grid)
    # s = s0 - delta_s >= 0 keeps only delta_s in {-1, 0} for s0 = 0
    assert [(pt.N, pt.s, pt.geometry.theta) for pt in points] == [
        (1, 1, 0.0), (1, 1, 0.001), (1, 0, 0.0), (1, 0, 0.001),
        (2, 1, 0.0), (2, 1, 0.001), (2, 0, 0.0), (2, 0, 0.001),
    ]


def test_scan_forbidden_channels_flagged():
    # small omega0 with a downward transition beats l*omega0: omega < 0
    ds, w = dressed_state(xi=0.1, delta0=0.05)
    grid = ScanGrid(N_list=(1,), delta_s_list=(-2,), thetas=(0.0,), phis=(0.0,), s0=0)
    points = spectrum_scan(ds, w, grid)
    assert len(points) == 1
    assert not points[0].valid
    assert points[0].note == "kinematically_forbidden"
    assert points[0].dW == 0.0


def test_scan_thread_determinism():
    ds, w = dressed_state(xi=0.3, delta0=0.01)
    grid = ScanGrid(
        N_list=(1, 2, 3), delta_s_list=(-1, 0), thetas=(0.0, 0.001, 0.002), phis=(0.0, 1.5)
    )
    seq = spectrum_scan(ds, w, grid, threads=1)
    par = spectrum_scan(ds, w, grid, threads=4)
    assert seq == par
