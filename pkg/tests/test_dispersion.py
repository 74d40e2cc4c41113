import json
import math
from importlib import resources

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.constants import speed_of_light

from udwsim.dispersion import (Chi2Profile, EpsilonProfile, RefractiveProfile, SellmeierModel,
                               accumulated_phase, exponential_epsilon_profile, group_velocity,
                               ktp_operating_point, load_sellmeier, make_exponential_gradient, phase_mismatch,
                               refractive_index, rel_inv_group_velocity, wavevector)
from udwsim.errors import DomainError

C = speed_of_light
MODELS, CITATION = load_sellmeier()
KTP_Y, KTP_Z = MODELS["y"], MODELS["z"]


def omega_of(nm):
    return 2 * math.pi * C / (nm * 1e-9)


def raw_coefficients(axis):
    data = json.loads(resources.files("udwsim").joinpath("data/ktp_sellmeier.json").read_text())
    return next(a for a in data["axes"] if a["name"] == axis)["coefficients"]


# ------------------------------------------------------------------ Sellmeier data


def test_coefficient_file_provenance():
    data = json.loads(resources.files("udwsim").joinpath("data/ktp_sellmeier.json").read_text())
    assert "Kato" in data["citation"]
    assert {a["name"] for a in data["axes"]} == {"x", "y", "z"}
    for axis in data["axes"]:
        assert set(axis["coefficients"]) == {"A", "B", "C", "D", "E"}
        assert axis["validity_nm"][0] < axis["validity_nm"][1]
    assert CITATION == data["citation"]


def test_ktp_ny_at_942nm_pinned_and_recomputed():
    co = raw_coefficients("y")
    l2 = 0.942 ** 2
    direct = math.sqrt(co["A"] + co["B"] / (l2 - co["C"]) + co["D"] / (l2 - co["E"]))
    n = refractive_index(KTP_Y, omega_of(942.0))
    assert n == pytest.approx(direct, rel=1e-12)
    assert n == pytest.approx(1.7495997181619618, rel=1e-12)


def test_birefringence_ordering():
    assert refractive_index(KTP_Z, omega_of(523.0)) > refractive_index(KTP_Y, omega_of(942.0))


def test_index_above_one_and_smooth_across_window():
    for model in MODELS.values():
        lam = np.linspace(model.lambda_min_nm, model.lambda_max_nm, 2001) * 1e-3
        n = model.n_of_wavelength(lam)
        assert np.all(n > 1)
        d2 = np.abs(np.diff(n, 2))
        assert np.all(np.isfinite(d2)) and d2.max() < 1e-3


def test_out_of_window_raises_with_window_in_message():
    with pytest.raises(DomainError, match="430"):
        refractive_index(KTP_Y, omega_of(300.0))


def test_identity_modulation_is_z_independent():
    p = RefractiveProfile(KTP_Y)
    w = omega_of(1000.0)
    assert refractive_index(p, w, 0.0) == refractive_index(p, w, 1e-3)


def test_modulated_profile():
    p = RefractiveProfile(KTP_Y, lambda w, z: 1 + 0.01 * np.sin(z * 1e5))
    w = omega_of(1000.0)
    assert refractive_index(p, w, 0.0) == pytest.approx(refractive_index(KTP_Y, w))
    assert refractive_index(p, w, 1e-5) != refractive_index(p, w, 0.0)
    add = RefractiveProfile(KTP_Y, lambda w, z: 0.1, kind="additive")
    assert refractive_index(add, w) == pytest.approx(refractive_index(KTP_Y, w) + 0.1)
    with pytest.raises(DomainError):
        RefractiveProfile(KTP_Y, kind="other")


# ------------------------------------------------------------------ wavevector and group velocity


def test_wavevector_examples():
    assert wavevector(KTP_Y, 0.0) == 0.0
    k3 = wavevector(KTP_Z, 3.6e15)
    assert k3 == pytest.approx(3.6e15 * KTP_Z.n(3.6e15) / C, rel=1e-15)
    assert k3 == pytest.approx(22714186.85812324, rel=1e-12)
    doubled = RefractiveProfile(KTP_Z, lambda w, z: 2.0)
    assert wavevector(doubled, 3.6e15) == pytest.approx(2 * k3, rel=1e-15)


def test_group_velocity_vacuum_is_c():
    assert group_velocity(SellmeierModel.vacuum(), 1e15) == pytest.approx(C, rel=1e-15)


def test_group_velocity_ktp_pinned():
    vg = group_velocity(KTP_Y, omega_of(1178.0))
    assert vg < C
    assert vg == pytest.approx(169280507.88654286, rel=1e-12)


def test_group_velocity_matches_finite_difference():
    rng = np.random.default_rng(3)
    lo, hi = omega_of(3400.0), omega_of(450.0)
    for w in rng.uniform(lo, hi, 100):
        h = 1e-6 * w
        for model in (KTP_Y, KTP_Z):
            fd = (wavevector(model, w + h) - wavevector(model, w - h)) / (2 * h)
            assert 1 / group_velocity(model, w) == pytest.approx(fd, rel=1e-6)


def test_group_velocity_of_modulated_profile_uses_finite_difference():
    p = RefractiveProfile(KTP_Y, lambda w, z: 1.0 + 0 * w)
    w = omega_of(1000.0)
    assert group_velocity(p, w) == pytest.approx(group_velocity(KTP_Y, w), rel=1e-7)


# ------------------------------------------------------------------ mismatch


def test_phase_mismatch_dispersionless_is_zero():
    vac = SellmeierModel.vacuum()
    assert phase_mismatch((vac, vac, vac), 1.6e15, 2.0e15, 3.6e15) == pytest.approx(0.0, abs=1e-8)


def test_phase_mismatch_checks_energy_conservation():
    with pytest.raises(DomainError):
        phase_mismatch((KTP_Y, KTP_Y, KTP_Z), 1.6e15, 2.0e15, 3.7e15)


def test_rel_inv_group_velocity_examples():
    vac = SellmeierModel.vacuum()
    assert rel_inv_group_velocity((vac, vac), 1.6e15, 3.6e15) == pytest.approx(0.0, abs=1e-20)
    op = ktp_operating_point()
    assert rel_inv_group_velocity((KTP_Y, KTP_Z), op.omega1, op.omega3) == pytest.approx(op.v_inv, rel=1e-15)


def test_ktp_operating_point_reconciliation():
    op = ktp_operating_point()
    assert op.delta_k0 > 0
    assert op.delta_k0 == pytest.approx(1742576.4837969802, rel=1e-10)
    assert op.v_inv == pytest.approx(9.951583284419924e-10, rel=1e-10)
    assert op.gap == pytest.approx(op.delta_k0 * op.v + op.omega2 - op.omega3, rel=1e-12)
    assert 0.5 <= op.gap / 1.8e14 <= 2
    # the poling period lands close to the 3.5 um used for the reference grating
    assert op.poling_period == pytest.approx(3.6057e-6, rel=1e-4)
    assert op.wavelengths_nm() == pytest.approx((1177.28, 941.83, 523.24), abs=0.01)


def test_ktp_mismatch_from_three_wavevectors():
    op = ktp_operating_point()
    manual = (op.omega3 * KTP_Z.n(op.omega3) - op.omega2 * KTP_Y.n(op.omega2) - op.omega1 * KTP_Y.n(op.omega1)) / C
    assert op.delta_k0 == pytest.approx(manual, rel=1e-12)


# ------------------------------------------------------------------ accumulated phase


def test_accumulated_phase_examples():
    assert accumulated_phase(lambda z: np.full_like(z, 3.0), 0.0, 2.0) == pytest.approx(6.0, rel=1e-14)
    dk, eps0, period = 1.7e6, 4e5, 3.6e-6
    val = accumulated_phase(lambda z: dk + eps0 * np.sin(2 * np.pi * z / period), 0.0, period)
    assert val == pytest.approx(dk * period, rel=1e-12)
    a, v, z = 2e12, 1e9, 50e-6
    val = accumulated_phase(lambda x: np.exp(-a * x / v) / v, 0.0, z)
    assert val == pytest.approx((1 - math.exp(-a * z / v)) / a, rel=1e-12)
    assert accumulated_phase(np.cos, 1.0, 1.0) == 0.0
    assert accumulated_phase(np.cos, 1.0, 0.0) == pytest.approx(-math.sin(1.0), rel=1e-12)


@given(st.floats(min_value=-3, max_value=3), st.floats(min_value=-3, max_value=3))
def test_accumulated_phase_additive(z1, z2):
    def f(z):
        return 1 + np.cos(3 * z) + z ** 2

    lhs = accumulated_phase(f, -1.0, z1) + accumulated_phase(f, z1, z2)
    assert lhs == pytest.approx(accumulated_phase(f, -1.0, z2), rel=1e-10, abs=1e-12)


# ------------------------------------------------------------------ exponential gradient


def test_exponential_gradient_examples():
    a, v = 3e13, 1e9
    g = make_exponential_gradient(a, v)
    assert float(g.inv_group_velocity(0.0)) == 1 / v
    assert float(g.q_tilde(0.0)) == 0.0
    assert float(g.q_tilde(1.0)) == pytest.approx(1 / a, rel=1e-12)
    slow = make_exponential_gradient(1e-3, v)
    z = np.linspace(0, 1e-4, 11)
    assert np.allclose(slow.inv_group_velocity(z), 1 / v, rtol=1e-12)
    assert np.allclose(slow.q_tilde(z), z / v, rtol=1e-12)
    assert np.allclose(make_exponential_gradient(0.0, v).q_tilde(z), z / v)
    assert make_exponential_gradient(-a, v).decelerating
    with pytest.raises(DomainError):
        make_exponential_gradient(a, 0.0)


def test_exponential_gradient_derivative_and_monotonicity():
    a, v = 5e13, 1e9
    g = make_exponential_gradient(a, v)
    rng = np.random.default_rng(5)
    z = rng.uniform(-50e-6, 50e-6, 100)
    h = 1e-9
    fd = (g.q_tilde(z + h) - g.q_tilde(z - h)) / (2 * h)
    assert np.allclose(fd, g.inv_group_velocity(z), rtol=1e-8)
    zs = np.sort(z)
    assert np.all(np.diff(g.q_tilde(zs)) > 0)


def test_exponential_epsilon_profile_is_compensated():
    op = ktp_operating_point()
    a = 2e13
    prof = exponential_epsilon_profile(op.delta_k0, a, op.v, op.omega1)
    z = np.linspace(-50e-6, 50e-6, 101)
    assert np.allclose(prof.inv_group_velocity(z), np.exp(-a * z / op.v) / op.v, rtol=1e-12)
    gap = prof.delta_k0(z) - prof.inv_group_velocity(z) * op.omega1
    assert np.allclose(gap, op.omega_tilde, rtol=1e-12, atol=0)
    phase_k, q = prof.primitives((-50e-6, 50e-6))
    assert np.allclose(q(z), -np.expm1(-a * z / op.v) / a, rtol=1e-12)


# ------------------------------------------------------------------ epsilon construction


@given(st.lists(st.floats(min_value=-1, max_value=1), min_size=1, max_size=5),
       st.floats(min_value=1e3, max_value=1e6))
def test_epsilon_cancellation(amps, freq):
    op = ktp_operating_point()
    amps = np.array(amps) * op.delta_k0

    def eps(z):
        z = np.asarray(z, dtype=float)
        return sum(a * np.sin((i + 1) * freq * z + i) for i, a in enumerate(amps))

    prof = EpsilonProfile(eps, op.delta_k0, op.v_inv, op.omega1)
    z = np.linspace(-100e-6, 100e-6, 301)
    target = op.delta_k0 - op.v_inv * op.omega1
    gap = prof.delta_k0(z) - prof.inv_group_velocity(z) * op.omega1
    assert np.max(np.abs(gap - target)) <= 1e-12 * abs(target)
    assert np.all(prof.effective_gap(z) == target)


def test_epsilon_zero_and_zero_mismatch():
    prof = EpsilonProfile(lambda z: 0 * z, 0.0, 2e-9, 1e15)
    assert prof.effective_gap() == pytest.approx(-2e-9 * 1e15)
    with pytest.raises(DomainError):
        EpsilonProfile(lambda z: 0 * z, 1.0, 1.0, 0.0)


# ------------------------------------------------------------------ chi2


def test_poled_profile_zero_mean_and_shape():
    period = 3.6e-6
    chi = Chi2Profile.poled(2.0, period)
    z = (np.arange(40000) + 0.5) / 40000 * 7 * period
    vals = chi.value(z)
    assert set(np.unique(vals)) == {-2.0, 2.0}
    assert abs(vals.sum()) == 0.0
    assert float(chi.value(0.25 * period)) == 2.0 and float(chi.value(0.75 * period)) == -2.0
    assert float(chi.value(1.25 * period)) == 2.0
    duty = Chi2Profile.poled(1.0, period, duty=0.25)
    assert float(duty.value(0.3 * period)) == -1.0


def test_chi2_validation_and_kinds():
    with pytest.raises(DomainError):
        Chi2Profile.poled(1.0, 0.0)
    with pytest.raises(DomainError):
        Chi2Profile.poled(1.0, 1.0, duty=1.5)
    assert np.all(Chi2Profile.uniform(3.0).value(np.zeros(3)) == 3.0)
    assert float(Chi2Profile.custom(lambda z: z * 2).value(1.5)) == 3.0
