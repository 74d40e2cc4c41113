"""Refractive indices, wavevectors and group velocities with position dependence.

SI units throughout: angular frequencies in rad/s, lengths in m, wavevectors
in 1/m, velocities in m/s.  Sellmeier data for KTP ships with the package in
``data/ktp_sellmeier.json``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Callable, Optional

import numpy as np
from scipy.constants import c as SPEED_OF_LIGHT

from .errors import DomainError
from .oscquad import OscillatoryIntegrand, QuadConfig, antiderivative, integrate

__all__ = [
    "SPEED_OF_LIGHT",
    "SellmeierModel",
    "RefractiveProfile",
    "EpsilonProfile",
    "MismatchProfile",
    "exponential_epsilon_profile",
    "Chi2Profile",
    "ExponentialGradient",
    "OperatingPoint",
    "load_sellmeier",
    "refractive_index",
    "wavevector",
    "group_velocity",
    "phase_mismatch",
    "rel_inv_group_velocity",
    "accumulated_phase",
    "make_exponential_gradient",
    "ktp_operating_point",
]


def _wavelength_um(omega):
    return 2 * math.pi * SPEED_OF_LIGHT / np.asarray(omega, dtype=float) * 1e6


@dataclass(frozen=True)
class SellmeierModel:
    """Two-pole Sellmeier form n^2 = A + B/(l^2 - C) + D/(l^2 - E), l in micrometres."""

    name: str
    A: float
    B: float
    C: float
    D: float
    E: float
    lambda_min_nm: float
    lambda_max_nm: float
    source: str = ""

    @classmethod
    def vacuum(cls):
        return cls("vacuum", 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, math.inf, "n = 1")

    def _check(self, lam_um):
        lam_nm = np.asarray(lam_um) * 1e3
        if np.any(lam_nm < self.lambda_min_nm) or np.any(lam_nm > self.lambda_max_nm):
            raise DomainError(
                f"wavelength outside the {self.name} Sellmeier window "
                f"[{self.lambda_min_nm}, {self.lambda_max_nm}] nm")

    def n_of_wavelength(self, lam_um):
        self._check(lam_um)
        l2 = np.asarray(lam_um, dtype=float) ** 2
        return np.sqrt(self.A + self.B / (l2 - self.C) + self.D / (l2 - self.E))

    def dn_dwavelength(self, lam_um):
        """Analytic dn/dlambda in 1/um."""
        lam = np.asarray(lam_um, dtype=float)
        l2 = lam ** 2
        dn2 = -2 * lam * (self.B / (l2 - self.C) ** 2 + self.D / (l2 - self.E) ** 2)
        return dn2 / (2 * self.n_of_wavelength(lam))

    def n(self, omega):
        return self.n_of_wavelength(_wavelength_um(omega))

    def dn_domega(self, omega):
        lam = _wavelength_um(omega)
        # dlambda/domega = -lambda/omega
        return self.dn_dwavelength(lam) * (-lam / np.asarray(omega, dtype=float))


@dataclass(frozen=True)
class RefractiveProfile:
    """n(omega; z) = base n(omega) modulated by a dimensionless function of (omega, z).

    ``kind="multiplicative"`` gives n * m(omega, z); ``"additive"`` gives n + m(omega, z).
    Without a modulation the profile is the bare Sellmeier model.
    """

    base: SellmeierModel
    modulation: Optional[Callable] = None
    kind: str = "multiplicative"

    def __post_init__(self):
        if self.kind not in ("multiplicative", "additive"):
            raise DomainError(f"unknown modulation kind {self.kind!r}")

    def n(self, omega, z=0.0):
        base = self.base.n(omega)
        if self.modulation is None:
            return base
        m = self.modulation(omega, z)
        return base * m if self.kind == "multiplicative" else base + m

    def dn_domega(self, omega, z=0.0):
        if self.modulation is None:
            return self.base.dn_domega(omega)
        h = 1e-6 * omega
        return (self.n(omega + h, z) - self.n(omega - h, z)) / (2 * h)


@lru_cache(maxsize=None)
def _load(path):
    if path is None:
        text = resources.files("udwsim").joinpath("data/ktp_sellmeier.json").read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    return json.loads(text)


def load_sellmeier(path=None):
    """Axis name -> SellmeierModel, plus the citation string, from a coefficient file."""
    data = _load(path)
    models = {}
    for axis in data["axes"]:
        co = axis["coefficients"]
        lo, hi = axis["validity_nm"]
        models[axis["name"]] = SellmeierModel(
            axis["name"], co["A"], co["B"], co["C"], co["D"], co["E"], lo, hi, data["citation"])
    return models, data["citation"]


def _as_profile(p):
    return p if isinstance(p, RefractiveProfile) else RefractiveProfile(p)


def refractive_index(profile, omega, z=0.0):
    n = _as_profile(profile).n(omega, z)
    if np.any(n < 1):
        raise DomainError("refractive index below 1")
    return float(n) if np.ndim(n) == 0 else n


def wavevector(profile, omega, z=0.0):
    """k = omega n(omega; z) / c.  Returns 0 at omega = 0 (limit, outside any Sellmeier window)."""
    if np.ndim(omega) == 0 and omega == 0:
        return 0.0
    return omega * refractive_index(profile, omega, z) / SPEED_OF_LIGHT


def _dk_domega(profile, omega, z):
    p = _as_profile(profile)
    return (p.n(omega, z) + omega * p.dn_domega(omega, z)) / SPEED_OF_LIGHT


def group_velocity(profile, omega, z=0.0):
    """(dk/domega)^-1 from the analytic Sellmeier derivative."""
    dk = _dk_domega(profile, omega, z)
    if np.any(dk <= 0):
        raise DomainError("dk/domega <= 0: anomalous dispersion region")
    out = 1.0 / dk
    return float(out) if np.ndim(out) == 0 else out


def phase_mismatch(profiles, omega1, omega2, omega3, z=0.0):
    """k3(omega3; z) - k2(omega2; z) - k1(omega1; z) for profiles (p1, p2, p3)."""
    if abs(omega1 + omega2 - omega3) > 1e-12 * abs(omega3):
        raise DomainError("frequencies must satisfy omega1 + omega2 = omega3")
    p1, p2, p3 = profiles
    return wavevector(p3, omega3, z) - wavevector(p2, omega2, z) - wavevector(p1, omega1, z)


def rel_inv_group_velocity(profiles, omega1, omega3, z=0.0):
    """1/v3 - 1/v1 for profiles (p1, p3)."""
    p1, p3 = profiles
    return _dk_domega(p3, omega3, z) - _dk_domega(p1, omega1, z)


def accumulated_phase(dk, z_lo, z, quad=None):
    """int_{z_lo}^{z} dk(zeta) dzeta."""
    if z == z_lo:
        return 0.0
    sign = 1.0
    lo, hi = z_lo, z
    if hi < lo:
        lo, hi, sign = hi, lo, -1.0
    integrand = OscillatoryIntegrand(dk, lambda x: np.zeros_like(x), (lo, hi))
    return sign * integrate(integrand, quad or QuadConfig(rel_tol=1e-12)).value.real


@dataclass(frozen=True)
class EpsilonProfile:
    """Compensated pair dk0(z) = dk_mean + eps(z), 1/dvg(z) = v_inv + eps(z)/(Omega3 - Omega2).

    The combination dk0 - (Omega3 - Omega2)/dvg is independent of eps.  (With
    a minus sign on the eps term the two contributions would add, not cancel.)
    ``eps_integral`` (int_0^z eps) may be given in closed form; otherwise it
    is built numerically when needed.
    """

    eps: Callable
    mean_mismatch: float
    v_inv: float
    pump_filter_diff: float
    eps_integral: Optional[Callable] = None
    gradient: Optional["ExponentialGradient"] = None

    def __post_init__(self):
        if self.pump_filter_diff == 0:
            raise DomainError("Omega3 - Omega2 must be non-zero")

    def delta_k0(self, z):
        return self.mean_mismatch + np.asarray(self.eps(np.asarray(z, dtype=float)), dtype=float)

    def inv_group_velocity(self, z):
        e = np.asarray(self.eps(np.asarray(z, dtype=float)), dtype=float)
        return self.v_inv + e / self.pump_filter_diff

    def effective_gap(self, z=0.0):
        """dk_mean - v_inv (Omega3 - Omega2); the same at every z."""
        value = self.mean_mismatch - self.v_inv * self.pump_filter_diff
        return value if np.ndim(z) == 0 else np.full(np.shape(z), value)

    @property
    def constant_gap(self):
        return True

    def primitives(self, window):
        """Callables z -> int_0^z dk0 and z -> int_0^z 1/dvg on ``window``."""
        big_e = self.eps_integral or antiderivative(self.eps, window[0], window[1])
        k, v_inv, d = self.mean_mismatch, self.v_inv, self.pump_filter_diff

        def phase_k(z):
            z = np.asarray(z, dtype=float)
            return k * z + big_e(z)

        def q_tilde(z):
            z = np.asarray(z, dtype=float)
            return v_inv * z + big_e(z) / d

        return phase_k, q_tilde


@dataclass(frozen=True)
class MismatchProfile:
    """Explicit, uncompensated pair dk0(z) and 1/dvg(z)."""

    delta_k0_func: Callable
    inv_group_velocity_func: Callable
    pump_filter_diff: float
    delta_k0_integral: Optional[Callable] = None
    inv_group_velocity_integral: Optional[Callable] = None
    gradient = None

    def delta_k0(self, z):
        return np.asarray(self.delta_k0_func(np.asarray(z, dtype=float)), dtype=float)

    def inv_group_velocity(self, z):
        return np.asarray(self.inv_group_velocity_func(np.asarray(z, dtype=float)), dtype=float)

    def effective_gap(self, z):
        return self.delta_k0(z) - self.inv_group_velocity(z) * self.pump_filter_diff

    @property
    def constant_gap(self):
        return False

    def primitives(self, window):
        lo, hi = window
        pk = self.delta_k0_integral or antiderivative(self.delta_k0, lo, hi)
        pq = self.inv_group_velocity_integral or antiderivative(self.inv_group_velocity, lo, hi)
        return pk, pq


@dataclass(frozen=True)
class ExponentialGradient:
    """1/dvg(z) = exp(-a z / v) / v and its primitive q(z) = (1 - exp(-a z / v)) / a."""

    accel: float
    v: float

    @property
    def decelerating(self):
        return self.accel < 0

    def inv_group_velocity(self, z):
        return np.exp(-self.accel * np.asarray(z, dtype=float) / self.v) / self.v

    def q_tilde(self, z):
        z = np.asarray(z, dtype=float)
        if self.accel == 0:
            return z / self.v
        return -np.expm1(-self.accel * z / self.v) / self.accel


def make_exponential_gradient(accel, v):
    if not v > 0:
        raise DomainError(f"scaling velocity must be positive, got {v}")
    if not math.isfinite(accel):
        raise DomainError("acceleration must be finite")
    return ExponentialGradient(float(accel), float(v))


def exponential_epsilon_profile(mean_mismatch, accel, v, pump_filter_diff):
    """Compensated profile whose relative inverse group velocity is exp(-a z / v) / v.

    Then eps(z) = (Omega3 - Omega2) (exp(-a z / v) - 1) / v and
    int_0^z 1/dvg = q(z) = (1 - exp(-a z / v)) / a.
    """
    grad = make_exponential_gradient(accel, v)
    d = float(pump_filter_diff)

    def eps(z):
        return d * np.expm1(-grad.accel * np.asarray(z, dtype=float) / v) / v

    def eps_integral(z):
        z = np.asarray(z, dtype=float)
        return d * (grad.q_tilde(z) - z / v)

    return EpsilonProfile(eps, float(mean_mismatch), 1.0 / v, d, eps_integral, grad)


@dataclass(frozen=True)
class Chi2Profile:
    """Second-order susceptibility along the waveguide (arbitrary overall scale)."""

    kind: str
    chi0: float = 1.0
    period: float = 0.0
    duty: float = 0.5
    origin: float = 0.0
    func: Optional[Callable] = None

    @classmethod
    def uniform(cls, chi0=1.0):
        return cls("uniform", chi0=float(chi0))

    @classmethod
    def poled(cls, chi0, period, duty=0.5, origin=0.0):
        if not period > 0:
            raise DomainError("poling period must be positive")
        if not 0 < duty <= 1:
            raise DomainError("duty must lie in (0, 1]")
        return cls("poled", chi0=float(chi0), period=float(period), duty=float(duty), origin=float(origin))

    @classmethod
    def custom(cls, chi):
        return cls("custom", func=chi)

    def value(self, z):
        z = np.asarray(z, dtype=float)
        if self.kind == "uniform":
            return np.full_like(z, self.chi0)
        if self.kind == "poled":
            frac = np.mod((z - self.origin) / self.period, 1.0)
            return np.where(frac < self.duty, self.chi0, -self.chi0)
        return np.asarray(self.func(z), dtype=float)


@dataclass(frozen=True)
class OperatingPoint:
    """Type-I z -> y + y KTP operating point derived from the Sellmeier set."""

    omega1: float
    omega2: float
    omega3: float
    profiles: tuple
    delta_k0: float
    v_inv: float
    citation: str

    @property
    def v(self):
        return 1.0 / self.v_inv

    @property
    def omega_tilde(self):
        return self.delta_k0 - self.v_inv * (self.omega3 - self.omega2)

    @property
    def gap(self):
        """Detector gap Omega = dk0 v + Omega2 - Omega3 (rad/s)."""
        return self.omega_tilde * self.v

    @property
    def poling_period(self):
        return 2 * math.pi / self.delta_k0

    def wavelengths_nm(self):
        return tuple(float(_wavelength_um(w)) * 1e3 for w in (self.omega1, self.omega2, self.omega3))


def ktp_operating_point(omega3=3.6e15, omega2=2.0e15, path=None):
    """Phase mismatch and relative inverse group velocity for Type-I KTP.

    The pump uses n_z; both down-converted fields use n_y.
    """
    models, citation = load_sellmeier(path)
    p1 = RefractiveProfile(models["y"])
    p2 = RefractiveProfile(models["y"])
    p3 = RefractiveProfile(models["z"])
    omega1 = omega3 - omega2
    if not (omega1 > 0 and omega2 > 0):
        raise DomainError("need 0 < Omega2 < Omega3")
    dk0 = phase_mismatch((p1, p2, p3), omega1, omega2, omega3)
    v_inv = rel_inv_group_velocity((p1, p3), omega1, omega3)
    return OperatingPoint(omega1, omega2, omega3, (p1, p2, p3), float(dk0), float(v_inv), citation)
