"""First-order SPDC amplitude in a dispersion-engineered waveguide.

The amplitude for detecting the signal photon in mode 2 (frequency Omega2)
with the idler at frequency omega is

    A_S(omega) = b_S(omega) int dz eta(z) exp(i Phi(z)) exp(i omega q(z)),

with eta = chi2 / sqrt(n1 n2 n3), Phi(z) = int_0^z [dk0 - (Omega3 - Omega2)/dvg],
q(z) = int_0^z 1/dvg and b_S(omega) = i kappa alpha(Omega2 + omega).  All
inputs are SI.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.constants import c as SPEED_OF_LIGHT
from scipy.constants import epsilon_0

from .chirp import ExpChirp
from .dispersion import Chi2Profile, EpsilonProfile, MismatchProfile
from .errors import DomainError
from .oscquad import OscillatoryIntegrand, QuadConfig, integrate
from .udw import AmplitudeResult

__all__ = [
    "PumpPulse",
    "WaveguideSpec",
    "SpdcScenario",
    "AccelAmplitude",
    "PoledReference",
    "pump_amplitude",
    "coupling_kappa",
    "b_s",
    "effective_gap_profile",
    "spdc_amplitude",
    "uniform_accel_amplitude",
    "poled_reference",
    "DEFAULT_LENGTH_LIMIT",
]

DEFAULT_LENGTH_LIMIT = 100e-6
_SINC_BRANCH = 1e-8


@dataclass(frozen=True)
class PumpPulse:
    """Gaussian pump: centre frequency (rad/s), duration (s), pulse energy (J)."""

    center: float
    duration: float
    energy: float = 1e-9
    quasi_monochromatic: bool = True

    def __post_init__(self):
        for name in ("center", "duration", "energy"):
            if not getattr(self, name) > 0:
                raise DomainError(f"pump {name} must be positive")

    def alpha(self, omega3):
        return pump_amplitude(self, omega3)


def pump_amplitude(pump, omega3):
    """(tau_p / sqrt(pi)) exp(-tau_p^2 (omega3 - Omega3)^2), in seconds."""
    tp = pump.duration
    return tp / math.sqrt(math.pi) * np.exp(-(tp * (np.asarray(omega3, dtype=float) - pump.center)) ** 2)


@dataclass(frozen=True)
class WaveguideSpec:
    z_i: float
    z_f: float
    area: float
    chi2: Chi2Profile = field(default_factory=Chi2Profile.uniform)
    profiles: tuple = None

    def __post_init__(self):
        if not self.z_i < self.z_f:
            raise DomainError("waveguide needs z_i < z_f")
        if not self.area > 0:
            raise DomainError("cross-section area must be positive")

    @classmethod
    def centered(cls, length, area=25e-12, chi2=None, profiles=None):
        return cls(-0.5 * length, 0.5 * length, area, chi2 or Chi2Profile.uniform(), profiles)

    @property
    def length(self):
        return self.z_f - self.z_i

    def index_product(self, z, omega1, omega2, omega3):
        """sqrt(n1 n2 n3) at the central frequencies; 1 without profiles."""
        z = np.asarray(z, dtype=float)
        if self.profiles is None:
            return np.ones_like(z)
        p1, p2, p3 = self.profiles
        return np.sqrt(p1.n(omega1, z) * p2.n(omega2, z) * p3.n(omega3, z))

    def eta_tilde(self, z, omega1, omega2, omega3):
        return self.chi2.value(z) / self.index_product(z, omega1, omega2, omega3)


@dataclass(frozen=True)
class SpdcScenario:
    """Pump, signal filter frequency Omega2, waveguide and mismatch profile.

    ``medium`` is an :class:`EpsilonProfile` or a :class:`MismatchProfile`;
    its ``pump_filter_diff`` must equal Omega3 - Omega2.
    """

    pump: PumpPulse
    omega2: float
    waveguide: WaveguideSpec
    medium: object

    def __post_init__(self):
        if not self.omega2 > 0 or not self.omega1 > 0:
            raise DomainError("need 0 < Omega2 < Omega3")
        if not isinstance(self.medium, (EpsilonProfile, MismatchProfile)):
            raise DomainError("medium must be an EpsilonProfile or MismatchProfile")
        if abs(self.medium.pump_filter_diff - self.omega1) > 1e-12 * self.omega1:
            raise DomainError("medium pump_filter_diff must equal Omega3 - Omega2")

    @property
    def omega3(self):
        return self.pump.center

    @property
    def omega1(self):
        return self.pump.center - self.omega2

    def eta_tilde(self, z):
        return self.waveguide.eta_tilde(z, self.omega1, self.omega2, self.omega3)

    @property
    def uniform_eta(self):
        wg = self.waveguide
        unmodulated = wg.profiles is None or all(p.modulation is None for p in wg.profiles)
        return wg.chi2.kind == "uniform" and unmodulated


def coupling_kappa(pump, waveguide, omega1, omega2):
    """kappa = 4 pi sqrt(sqrt2 U0 pi Omega1 Omega2 / (sqrt(pi) (4 pi)^3 eps0 A c^3 tau_p)).

    Units: J s^-2 / (F m^-1 m^2 m^3 s^-3 s) = J / (F m^4) = V^2 / m^4, so kappa is in V/m^2.
    """
    values = (pump.energy, waveguide.area, pump.duration, omega1, omega2)
    if any(not x > 0 for x in values):
        raise DomainError("coupling_kappa needs positive U0, A, tau_p, Omega1, Omega2")
    num = math.sqrt(2) * pump.energy * math.pi * omega1 * omega2
    den = math.sqrt(math.pi) * (4 * math.pi) ** 3 * epsilon_0 * waveguide.area * SPEED_OF_LIGHT ** 3 * pump.duration
    return 4 * math.pi * math.sqrt(num / den)


def b_s(scenario, omega):
    """i kappa alpha(Omega2 + omega); alpha is held at its peak for a quasi-monochromatic pump."""
    kappa = coupling_kappa(scenario.pump, scenario.waveguide, scenario.omega1, scenario.omega2)
    pump = scenario.pump
    alpha = pump.alpha(pump.center) if pump.quasi_monochromatic else pump.alpha(scenario.omega2 + omega)
    return 1j * kappa * float(alpha)


def effective_gap_profile(scenario, z):
    """dk0(z) - (Omega3 - Omega2) / dvg(z), in 1/m."""
    return scenario.medium.effective_gap(z)


def _linear_phase_integral(k, lo, hi):
    """int_lo^hi exp(i k z) dz, exactly."""
    half = 0.5 * (hi - lo)
    return 2 * half * cmath.exp(1j * k * 0.5 * (lo + hi)) * float(np.sinc(k * half / math.pi))


def _chi2_breakpoints(chi2, lo, hi):
    if chi2.kind != "poled":
        return np.array([lo, hi])
    first = math.floor((lo - chi2.origin) / chi2.period)
    last = math.ceil((hi - chi2.origin) / chi2.period)
    n = np.arange(first, last + 1)
    cuts = chi2.origin + chi2.period * np.concatenate([n, n + chi2.duty])
    cuts = cuts[(cuts > lo) & (cuts < hi)]
    return np.unique(np.concatenate([[lo], cuts, [hi]]))


def spdc_amplitude(scenario, omega=None, quad=None):
    """A_S(omega) for the scenario; ``omega`` defaults to Omega1.

    Uniform eta with an exponential gradient uses the chirp closure; everything
    else is integrated directly, panel by panel between poling boundaries.
    ``diagnostics["integral"]`` holds the bare z-integral.
    """
    quad = quad or QuadConfig()
    omega = scenario.omega1 if omega is None else float(omega)
    if not omega > 0:
        raise DomainError("omega must be positive")
    wg = scenario.waveguide
    medium = scenario.medium
    b = b_s(scenario, omega)
    lo, hi = wg.z_i, wg.z_f

    if wg.chi2.kind == "uniform" and wg.chi2.chi0 == 0:
        return AmplitudeResult(0j, 0.0, {"route": "zero", "integral": 0j})

    grad = getattr(medium, "gradient", None)
    if grad is not None and scenario.uniform_eta:
        eta = float(scenario.eta_tilde(np.array(lo)))
        gap = medium.effective_gap()
        if grad.accel == 0 or abs(grad.accel) * wg.length / grad.v < _SINC_BRANCH:
            value = _linear_phase_integral(gap + omega / grad.v, lo, hi)
            res_value, res_err, diag = value, 0.0, {"route": "linear"}
        else:
            chirp = ExpChirp(rate=gap, amp=-omega / grad.accel, decay=grad.accel / grad.v)
            res = chirp.integral(lo, hi, quad)
            res_value, res_err = res.value, res.abs_error
            diag = {**res.diagnostics, "route": "chirp", "panels": res.panels}
        integral = eta * res_value
        diag["integral"] = integral
        return AmplitudeResult(b * integral, abs(b * eta) * res_err, diag)

    phase_k, q_tilde = medium.primitives((lo, hi))
    d = medium.pump_filter_diff

    def phase(z):
        return phase_k(z) + (omega - d) * q_tilde(z)

    def dphase(z):
        return medium.delta_k0(z) + (omega - d) * medium.inv_group_velocity(z)

    total = 0j
    err = 0.0
    panels = 0
    edges = _chi2_breakpoints(wg.chi2, lo, hi)
    for a, c in zip(edges[:-1], edges[1:]):
        mid = 0.5 * (a + c)
        if wg.chi2.kind == "poled":
            # constant sign on this segment; avoids sampling the jump
            chi = float(wg.chi2.value(np.array(mid)))

            def amp(z, chi=chi):
                return chi / wg.index_product(z, scenario.omega1, scenario.omega2, scenario.omega3)
        else:
            amp = scenario.eta_tilde
        res = integrate(OscillatoryIntegrand(amp, phase, (a, c), dphase), quad)
        total += res.value
        err += res.abs_error
        panels += res.panels
    return AmplitudeResult(b * total, abs(b) * err,
                           {"route": "quadrature", "panels": panels, "integral": total})


@dataclass(frozen=True)
class AccelAmplitude:
    """Bare integral over the crystal and its value normalised by the length."""

    raw: complex
    abs_error: float
    length: float
    diagnostics: dict = field(default_factory=dict)

    @property
    def normalized(self):
        return self.raw / self.length

    @property
    def probability(self):
        return abs(self.normalized) ** 2

    @property
    def probability_error(self):
        return 2 * abs(self.normalized) * self.abs_error / self.length


def uniform_accel_amplitude(omega_tilde, d_omega, accel, v, z_i, z_f, quad=None,
                            length_limit=DEFAULT_LENGTH_LIMIT):
    """int_{z_i}^{z_f} exp(i omega_tilde z + i d_omega q(z)) dz with q(z) = (1 - exp(-a z/v))/a.

    This is the accelerated-analogue amplitude with the constant prefactor
    i kappa eta stripped.  It differs from the form with
    exp(-i (d_omega/a) exp(-a z/v)) only by the constant phase exp(i d_omega/a),
    which is dropped so the a -> 0 limit is free of cancellation.  For
    |a| L / v below 1e-8 the linear-phase (sinc) limit is returned.
    ``length_limit`` (metres, None to disable) caps the crystal length.
    """
    if not v > 0:
        raise DomainError("scaling velocity must be positive")
    if not z_i < z_f:
        raise DomainError("need z_i < z_f")
    length = z_f - z_i
    if length_limit is not None and length > length_limit * (1 + 1e-12):
        raise DomainError(f"crystal length {length:.3g} m exceeds the modelling limit {length_limit:.3g} m")
    quad = quad or QuadConfig()
    if d_omega == 0 or accel == 0 or abs(accel) * length / v < _SINC_BRANCH:
        k = omega_tilde + d_omega / v
        return AccelAmplitude(_linear_phase_integral(k, z_i, z_f), 0.0, length, {"route": "sinc_limit"})
    chirp = ExpChirp(rate=omega_tilde, amp=-d_omega / accel, decay=accel / v)
    res = chirp.integral(z_i, z_f, quad)
    return AccelAmplitude(res.value, res.abs_error, length,
                          {**res.diagnostics, "route": "chirp", "panels": res.panels,
                           "total_phase": res.total_phase})


@dataclass(frozen=True)
class PoledReference:
    amplitude: float
    probability: float
    periods: float
    two_over_pi: float = 2 / math.pi
    two_over_pi_squared: float = (2 / math.pi) ** 2


def poled_reference(mean_mismatch, period, length, duty=0.5):
    """|int_0^L s(z) exp(i dk z) dz| / L for the +-1 square wave s of the given period and duty.

    Integrated exactly segment by segment.  ``amplitude`` tends to 2/pi for a
    long first-order grating at duty 0.5; ``probability`` is its square.
    """
    if not (mean_mismatch > 0 and period > 0 and length > 0):
        raise DomainError("poled_reference needs positive mismatch, period and length")
    if not 0 < duty <= 1:
        raise DomainError("duty must lie in (0, 1]")
    target = 2 * math.pi / mean_mismatch
    if abs(period - target) > 0.01 * target:
        warnings.warn(f"poling period {period:.4g} m differs from 2 pi / dk = {target:.4g} m by more than 1%",
                      RuntimeWarning, stacklevel=2)
    chi2 = Chi2Profile.poled(1.0, period, duty)
    edges = _chi2_breakpoints(chi2, 0.0, length)
    mid = 0.5 * (edges[:-1] + edges[1:])
    signs = chi2.value(mid)
    k = mean_mismatch
    phases = np.exp(1j * k * edges)
    total = np.sum(signs * (phases[1:] - phases[:-1])) / (1j * k)
    amp = float(abs(total)) / length
    return PoledReference(amp, amp ** 2, length / period)
