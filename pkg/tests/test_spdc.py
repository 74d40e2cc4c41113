import math
import warnings

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import quad as scipy_quad

from udwsim.dispersion import Chi2Profile, EpsilonProfile, MismatchProfile, exponential_epsilon_profile, ktp_operating_point
from udwsim.errors import DomainError
from udwsim.oscquad import OscillatoryIntegrand, QuadConfig, oracle_brute
from udwsim.spdc import (PumpPulse, SpdcScenario, WaveguideSpec, b_s, coupling_kappa, effective_gap_profile,
                         poled_reference, pump_amplitude, spdc_amplitude, uniform_accel_amplitude)

OP = ktp_operating_point()


def scenario(length, medium=None, chi2=None, window="centered", profiles=None, pump=None):
    medium = medium or exponential_epsilon_profile(OP.delta_k0, 0.0, OP.v, OP.omega1)
    if window == "centered":
        wg = WaveguideSpec.centered(length, chi2=chi2, profiles=profiles)
    else:
        wg = WaveguideSpec(window[0], window[1], 25e-12, chi2 or Chi2Profile.uniform(), profiles)
    return SpdcScenario(pump or PumpPulse(OP.omega3, 1e-12), OP.omega2, wg, medium)


def sinc(x):
    return np.sinc(x / math.pi)


# ------------------------------------------------------------------ pump and coupling


def test_pump_amplitude_examples():
    pump = PumpPulse(3.6e15, 2e-12)
    assert pump_amplitude(pump, 3.6e15) == pytest.approx(2e-12 / math.sqrt(math.pi), rel=1e-15)
    assert pump_amplitude(pump, 3.6e15 + 1 / 2e-12) == pytest.approx(2e-12 / math.sqrt(math.pi) / math.e, rel=1e-14)


@given(st.floats(min_value=1e-15, max_value=1e-9))
def test_pump_normalisation(tp):
    pump = PumpPulse(3.6e15, tp)
    # integrate |alpha / tp|^2 over x = tp (omega - center) to keep the integrand O(1)
    val, _ = scipy_quad(lambda x: (pump_amplitude(pump, pump.center + x / tp) / tp) ** 2, -10, 10,
                        epsabs=0, epsrel=1e-10)
    assert val * tp == pytest.approx(tp / math.sqrt(2 * math.pi), rel=1e-8)


def test_pump_validation():
    with pytest.raises(DomainError):
        PumpPulse(3.6e15, 0.0)


def test_coupling_kappa_scaling_and_pin():
    pump = PumpPulse(OP.omega3, 1e-12, 1e-9)
    wg = WaveguideSpec.centered(100e-6)
    k = coupling_kappa(pump, wg, OP.omega1, OP.omega2)
    assert k == pytest.approx(327144482784277.1, rel=1e-12)
    assert coupling_kappa(PumpPulse(OP.omega3, 1e-12, 4e-9), wg, OP.omega1, OP.omega2) == pytest.approx(2 * k)
    assert coupling_kappa(pump, WaveguideSpec.centered(100e-6, area=100e-12), OP.omega1, OP.omega2) == pytest.approx(k / 2)
    assert coupling_kappa(PumpPulse(OP.omega3, 4e-12, 1e-9), wg, OP.omega1, OP.omega2) == pytest.approx(k / 2)
    with pytest.raises(DomainError):
        coupling_kappa(pump, wg, 0.0, OP.omega2)


def test_waveguide_and_scenario_validation():
    with pytest.raises(DomainError):
        WaveguideSpec(1.0, 0.0, 1e-12)
    with pytest.raises(DomainError):
        WaveguideSpec(0.0, 1.0, 0.0)
    with pytest.raises(DomainError):
        SpdcScenario(PumpPulse(OP.omega3, 1e-12), OP.omega3 * 1.1, WaveguideSpec.centered(1e-5),
                     exponential_epsilon_profile(OP.delta_k0, 0.0, OP.v, OP.omega1))
    with pytest.raises(DomainError):
        SpdcScenario(PumpPulse(OP.omega3, 1e-12), OP.omega2, WaveguideSpec.centered(1e-5),
                     exponential_epsilon_profile(OP.delta_k0, 0.0, OP.v, OP.omega1 * 1.01))


# ------------------------------------------------------------------ effective gap


def test_effective_gap_examples():
    z = np.linspace(-50e-6, 50e-6, 11)
    sc = scenario(100e-6, EpsilonProfile(lambda z: 3e5 * np.cos(1e5 * z), OP.delta_k0, OP.v_inv, OP.omega1))
    assert np.allclose(effective_gap_profile(sc, z), OP.delta_k0 - OP.v_inv * OP.omega1, rtol=1e-12)
    zero = scenario(100e-6, EpsilonProfile(lambda z: 0 * z, 0.0, OP.v_inv, OP.omega1))
    assert np.allclose(effective_gap_profile(zero, z), -OP.v_inv * OP.omega1)
    assert 0.5 <= OP.omega_tilde * OP.v / 1.8e14 <= 2


# ------------------------------------------------------------------ spdc amplitude


def test_zero_chi2_gives_zero():
    sc = scenario(50e-6, chi2=Chi2Profile.uniform(0.0))
    assert spdc_amplitude(sc).amplitude == 0


@pytest.mark.parametrize("length", [5e-6, 37e-6, 100e-6])
def test_constant_profiles_give_sinc(length):
    sc = scenario(length)
    res = spdc_amplitude(sc)
    b = b_s(sc, OP.omega1)
    expected = abs(b) * length * abs(sinc(OP.delta_k0 * length / 2))
    assert abs(res.amplitude) == pytest.approx(expected, rel=1e-10)


def test_index_profiles_scale_eta():
    plain = spdc_amplitude(scenario(20e-6)).amplitude
    with_n = spdc_amplitude(scenario(20e-6, profiles=OP.profiles)).amplitude
    n1, n2, n3 = (p.n(w) for p, w in zip(OP.profiles, (OP.omega1, OP.omega2, OP.omega3)))
    assert with_n == pytest.approx(plain / math.sqrt(n1 * n2 * n3), rel=1e-10)


def test_two_path_consistency():
    rng = np.random.default_rng(21)
    for _ in range(10):
        length = rng.uniform(5e-6, 100e-6)
        accel = 10 ** rng.uniform(-1, 1) * OP.v / length
        medium = exponential_epsilon_profile(OP.delta_k0, accel, OP.v, OP.omega1)
        sc = scenario(length, medium)
        direct = spdc_amplitude(sc, quad=QuadConfig(rel_tol=1e-11)).amplitude
        raw = uniform_accel_amplitude(OP.omega_tilde, OP.omega1, accel, OP.v, -length / 2, length / 2,
                                      QuadConfig(rel_tol=1e-11)).raw
        assert abs(direct - b_s(sc, OP.omega1) * raw) <= 1e-8 * abs(direct)


def test_generic_quadrature_route_matches_chirp_route():
    length, accel = 40e-6, 3e13
    grad = exponential_epsilon_profile(OP.delta_k0, accel, OP.v, OP.omega1)
    # same profile without the closed-form hooks forces the generic z-quadrature
    plain = MismatchProfile(grad.delta_k0, grad.inv_group_velocity, OP.omega1)
    a = spdc_amplitude(scenario(length, grad), quad=QuadConfig(rel_tol=1e-11))
    b = spdc_amplitude(scenario(length, plain), quad=QuadConfig(rel_tol=1e-11))
    assert a.diagnostics["route"] == "chirp"
    assert abs(a.amplitude - b.amplitude) <= 1e-8 * abs(a.amplitude)


def test_translation_changes_only_the_phase():
    length, accel, shift = 30e-6, 4e13, 17e-6
    base = exponential_epsilon_profile(OP.delta_k0, accel, OP.v, OP.omega1)

    def moved_vg(z):
        return base.inv_group_velocity(np.asarray(z) - shift)

    def moved_dk(z):
        return base.delta_k0(np.asarray(z) - shift)

    moved = MismatchProfile(moved_dk, moved_vg, OP.omega1)
    a = spdc_amplitude(scenario(length, base), quad=QuadConfig(rel_tol=1e-11)).amplitude
    b = spdc_amplitude(scenario(length, moved, window=(-length / 2 + shift, length / 2 + shift)),
                       quad=QuadConfig(rel_tol=1e-11)).amplitude
    assert abs(b) == pytest.approx(abs(a), rel=1e-8)


def test_broadband_pump_uses_alpha_at_signal_plus_omega():
    pump = PumpPulse(OP.omega3, 1e-13, quasi_monochromatic=False)
    sc = scenario(10e-6, pump=pump)
    omega = OP.omega1 + 3e12
    expected = 1j * coupling_kappa(pump, sc.waveguide, OP.omega1, OP.omega2) * pump_amplitude(pump, OP.omega2 + omega)
    assert b_s(sc, omega) == pytest.approx(expected, rel=1e-14)


def test_poled_crystal_amplitude_matches_reference():
    length = 20 * OP.poling_period
    chi2 = Chi2Profile.poled(1.0, OP.poling_period, origin=-length / 2)
    sc = scenario(length, chi2=chi2)
    res = spdc_amplitude(sc)
    normalized = abs(res.diagnostics["integral"]) / length
    assert normalized == pytest.approx(poled_reference(OP.delta_k0, OP.poling_period, length).amplitude, rel=1e-9)


# ------------------------------------------------------------------ accelerated analogue


@pytest.mark.parametrize("length", [10e-6, 100e-6])
def test_sinc_limit(length):
    accel = 1e-6 * OP.v / length
    res = uniform_accel_amplitude(OP.omega_tilde, OP.omega1, accel, OP.v, -length / 2, length / 2)
    assert abs(res.normalized) == pytest.approx(abs(sinc(OP.delta_k0 * length / 2)), rel=1e-4)
    # the analytic branch below |a| L / v = 1e-8
    tiny = uniform_accel_amplitude(OP.omega_tilde, OP.omega1, 1e-9 * OP.v / length, OP.v, -length / 2, length / 2)
    assert tiny.diagnostics["route"] == "sinc_limit"
    assert tiny.probability == pytest.approx(sinc(OP.delta_k0 * length / 2) ** 2, rel=1e-12)
    assert tiny.probability < 1e-2


def test_stationary_limit_agrees_with_chirp_route_across_branch():
    length = 50e-6
    just_above = uniform_accel_amplitude(OP.omega_tilde, OP.omega1, 2e-8 * OP.v / length, OP.v,
                                         -length / 2, length / 2)
    assert just_above.diagnostics["route"] == "chirp"
    assert abs(just_above.normalized) == pytest.approx(abs(sinc(OP.delta_k0 * length / 2)), rel=1e-5)


def test_unit_integrand():
    res = uniform_accel_amplitude(0.0, 0.0, 1e13, OP.v, -5e-6, 5e-6)
    assert abs(res.normalized) == 1.0


def test_accel_amplitude_against_brute_force_oracle():
    # 2 pi Omega / a = 30 keeps the fast-end phase within what 10^7 Simpson panels resolve
    length = 100e-6
    accel = 2 * math.pi * OP.gap / 30.0
    res = uniform_accel_amplitude(OP.omega_tilde, OP.omega1, accel, OP.v, -length / 2, length / 2,
                                  QuadConfig(rel_tol=1e-10))
    v = OP.v
    f = OscillatoryIntegrand(lambda z: np.ones_like(z),
                             lambda z: OP.omega_tilde * z - OP.omega1 * np.expm1(-accel * z / v) / accel,
                             (-length / 2, length / 2))
    oracle = oracle_brute(f, 10 ** 7)
    assert abs(res.raw - oracle) <= 1e-6 * abs(oracle)


def _mp_antiderivative(rate, amp, decay, x):
    """int_{-inf}^x exp(i(rate z + amp expm1(-decay z))) dz through the upper incomplete gamma function."""
    s = mp.mpc(0, -mp.mpf(rate) / decay)
    sigma = 1 if amp > 0 else -1
    u = abs(mp.mpf(amp)) * mp.e ** (-mp.mpf(decay) * x)
    pref = mp.e ** (-1j * mp.mpf(amp)) * abs(mp.mpf(amp)) ** (-s) / decay
    return pref * mp.e ** (1j * sigma * mp.pi * s / 2) * mp.gammainc(s, -1j * sigma * u)


@pytest.mark.parametrize("x", [3.0, 1.0, 0.2])
def test_accel_amplitude_against_incomplete_gamma(x):
    # mid and upper part of the acceleration grid, where the phase runs to ~1e7 rad and more
    length = 100e-6
    accel = 2 * math.pi * OP.gap / x
    res = uniform_accel_amplitude(OP.omega_tilde, OP.omega1, accel, OP.v, -length / 2, length / 2,
                                  QuadConfig(rel_tol=1e-10))
    with mp.workdps(40):
        args = (OP.omega_tilde, -OP.omega1 / accel, accel / OP.v)
        exact = complex(_mp_antiderivative(*args, mp.mpf(length) / 2) - _mp_antiderivative(*args, -mp.mpf(length) / 2))
    assert abs(res.raw - exact) <= 1e-8 * abs(exact)


def test_length_limit_knob():
    with pytest.raises(DomainError, match="modelling limit"):
        uniform_accel_amplitude(OP.omega_tilde, OP.omega1, 1e13, OP.v, -100e-6, 100e-6)
    res = uniform_accel_amplitude(OP.omega_tilde, OP.omega1, 1e13, OP.v, -500e-6, 500e-6, length_limit=None)
    assert 0 <= res.probability <= 1
    assert res.probability_error >= 0


def test_accel_amplitude_validation():
    with pytest.raises(DomainError):
        uniform_accel_amplitude(OP.omega_tilde, OP.omega1, 1e13, -1.0, 0.0, 1e-5)
    with pytest.raises(DomainError):
        uniform_accel_amplitude(OP.omega_tilde, OP.omega1, 1e13, OP.v, 1e-5, 0.0)


# ------------------------------------------------------------------ poling reference


def test_poled_reference_examples():
    lam = OP.poling_period
    whole = poled_reference(OP.delta_k0, lam, 30 * lam)
    assert whole.amplitude == pytest.approx(2 / math.pi, rel=1e-12)
    assert whole.probability == pytest.approx((2 / math.pi) ** 2, rel=1e-12)
    assert whole.two_over_pi == 2 / math.pi and whole.two_over_pi_squared == (2 / math.pi) ** 2
    at_100um = poled_reference(OP.delta_k0, lam, 100e-6)
    assert at_100um.amplitude == pytest.approx(0.636436279034645, rel=1e-10)
    long = poled_reference(OP.delta_k0, lam, 20000.3 * lam)
    assert long.amplitude == pytest.approx(2 / math.pi, rel=1e-4)


def test_poled_reference_duty_one_is_unpoled():
    length = 47e-6
    ref = poled_reference(OP.delta_k0, OP.poling_period, length, duty=1.0)
    assert ref.amplitude == pytest.approx(abs(sinc(OP.delta_k0 * length / 2)), rel=1e-10)
    assert ref.amplitude < 0.05


def test_poled_reference_warns_on_wrong_period():
    with pytest.warns(RuntimeWarning):
        poled_reference(OP.delta_k0, 1.05 * OP.poling_period, 50e-6)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        poled_reference(OP.delta_k0, 1.005 * OP.poling_period, 50e-6)
    with pytest.raises(DomainError):
        poled_reference(OP.delta_k0, OP.poling_period, 50e-6, duty=0.0)
