"""Unruh-DeWitt detector coupled to a massless scalar field in 1+1 dimensions.

Natural units (hbar = c = 1).  The detector couples to a single right-moving
mode of frequency omega, so the trajectory enters only through the lightcone
coordinate q(tau) = t(tau) - x(tau).  The first-order transition amplitude is

    A = b(omega) * int eta(tau) exp(i Phi(tau)) exp(i omega q(tau)) dtau,
    b(omega) = -i lambda M / sqrt(4 pi omega),

where Phi(tau) = int_0^tau Omega(s) ds is the accumulated gap phase.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Union

import numpy as np
from scipy.special import loggamma

from .chirp import ExpChirp
from .errors import DomainError
from .oscquad import OscillatoryIntegrand, QuadConfig, antiderivative, integrate

__all__ = [
    "Trajectory",
    "SwitchingFunction",
    "DetectorSpec",
    "FieldMode",
    "AmplitudeResult",
    "b_coefficient",
    "amplitude_integral",
    "transition_amplitude",
    "inertial_closed_form",
    "inertial_amplitude",
    "accel_closed_form",
    "planck_response",
]


@dataclass(frozen=True)
class Trajectory:
    """Detector worldline, described by q(tau) = t(tau) - x(tau).

    Use the constructors :meth:`inertial`, :meth:`uniform_accel` and :meth:`custom`.
    ``uniform_accel`` gives q = offset - exp(-a tau)/a; the default offset 0
    is the standard Rindler parametrisation.
    """

    kind: str
    velocity: float = 0.0
    offset: float = 0.0
    accel: float = 0.0
    func: Optional[Callable] = None
    derivative: Optional[Callable] = None

    @classmethod
    def inertial(cls, velocity, offset=0.0):
        if not -1 < velocity < 1:
            raise DomainError(f"inertial velocity must lie in (-1, 1), got {velocity}")
        return cls("inertial", velocity=float(velocity), offset=float(offset))

    @classmethod
    def uniform_accel(cls, accel, offset=0.0):
        if not (accel > 0 and math.isfinite(accel)):
            raise DomainError(f"acceleration must be positive and finite, got {accel}")
        return cls("uniform_accel", accel=float(accel), offset=float(offset))

    @classmethod
    def custom(cls, q, derivative=None):
        return cls("custom", func=q, derivative=derivative)

    @property
    def gamma(self):
        return 1.0 / math.sqrt(1.0 - self.velocity ** 2)

    def q(self, tau):
        tau = np.asarray(tau, dtype=float)
        if self.kind == "inertial":
            return self.gamma * (1 - self.velocity) * tau - self.offset
        if self.kind == "uniform_accel":
            a = self.accel
            # offset - e^{-a tau}/a, written so that offset = 1/a cancels exactly
            return (self.offset - 1.0 / a) - np.expm1(-a * tau) / a
        return np.asarray(self.func(tau), dtype=float)

    def q_dot(self, tau):
        """dq/dtau, or None when unknown for a custom trajectory."""
        tau = np.asarray(tau, dtype=float)
        if self.kind == "inertial":
            return np.full_like(tau, self.gamma * (1 - self.velocity))
        if self.kind == "uniform_accel":
            return np.exp(-self.accel * tau)
        if self.derivative is None:
            return None
        return np.asarray(self.derivative(tau), dtype=float)


@dataclass(frozen=True)
class SwitchingFunction:
    kind: str
    tau_i: float = -math.inf
    tau_f: float = math.inf
    center: float = 0.0
    width: float = 1.0
    func: Optional[Callable] = None

    @classmethod
    def rect(cls, tau_i, tau_f):
        if not tau_i < tau_f:
            raise DomainError("rect switching needs tau_i < tau_f")
        return cls("rect", tau_i=float(tau_i), tau_f=float(tau_f))

    @classmethod
    def gaussian(cls, center, width):
        if not width > 0:
            raise DomainError("gaussian switching width must be positive")
        return cls("gaussian", center=float(center), width=float(width))

    @classmethod
    def custom(cls, eta):
        return cls("custom", func=eta)

    def eta(self, tau):
        tau = np.asarray(tau, dtype=float)
        if self.kind == "rect":
            return ((tau >= self.tau_i) & (tau <= self.tau_f)).astype(float)
        if self.kind == "gaussian":
            return np.exp(-0.5 * ((tau - self.center) / self.width) ** 2)
        return np.asarray(self.func(tau), dtype=float)


@dataclass(frozen=True)
class DetectorSpec:
    """Energy gap, coupling strength (inverse length) and monopole matrix element.

    ``gap`` is a number or a callable Omega(tau).  For a callable gap the phase
    int_0^tau Omega is needed; pass it as ``gap_phase`` if known in closed form,
    otherwise it is built from a Chebyshev interpolant on the integration window.
    """

    gap: Union[float, Callable]
    coupling: float = 1.0
    monopole: complex = 1.0
    gap_phase: Optional[Callable] = None

    @classmethod
    def constant(cls, gap, coupling=1.0, monopole=1.0):
        return cls(float(gap), coupling, monopole)

    @property
    def constant_gap(self):
        return not callable(self.gap)

    @property
    def de_excitation(self):
        return self.constant_gap and self.gap < 0

    def gap_rate(self, tau):
        if self.constant_gap:
            return np.full_like(np.asarray(tau, dtype=float), self.gap)
        return np.asarray(self.gap(np.asarray(tau, dtype=float)), dtype=float)

    def phase_function(self, window):
        """Callable tau -> int_0^tau Omega(s) ds, valid on ``window``."""
        if self.constant_gap:
            gap = self.gap
            return lambda tau: gap * np.asarray(tau, dtype=float)
        if self.gap_phase is not None:
            return self.gap_phase
        return antiderivative(self.gap_rate, window[0], window[1])


@dataclass(frozen=True)
class FieldMode:
    omega: float

    def __post_init__(self):
        if not self.omega > 0:
            raise DomainError(f"field-mode frequency must be positive, got {self.omega}")


@dataclass(frozen=True)
class AmplitudeResult:
    amplitude: complex
    abs_error: float
    diagnostics: dict = field(default_factory=dict)

    @property
    def probability(self):
        return abs(self.amplitude) ** 2


def b_coefficient(spec, mode):
    """Prefactor -i lambda M / sqrt(4 pi omega)."""
    omega = mode.omega if isinstance(mode, FieldMode) else float(mode)
    if not omega > 0:
        raise DomainError(f"omega must be positive, got {omega}")
    return -1j * spec.coupling * spec.monopole / math.sqrt(4 * math.pi * omega)


def amplitude_integral(spec, trajectory, switching, omega, window=None, quad=None,
                       switch_off="sudden"):
    """The integral int eta exp(i Phi) exp(i omega q) dtau, without the b prefactor.

    ``window`` defaults to the support of a rect switching function.  With
    ``switch_off="adiabatic"`` the detector is switched off infinitely slowly
    after ``window[1]`` (Abel limit), which removes the boundary term a sudden
    switch-off leaves behind; this needs a uniformly accelerated detector with
    constant gap and rect switching.
    """
    quad = quad or QuadConfig()
    omega = omega.omega if isinstance(omega, FieldMode) else float(omega)
    if window is None:
        if switching.kind != "rect":
            raise DomainError("window is required unless switching is rect")
        window = (switching.tau_i, switching.tau_f)
    tau_i, tau_f = float(window[0]), float(window[1])
    if switching.kind == "rect":
        tau_i, tau_f = max(tau_i, switching.tau_i), min(tau_f, switching.tau_f)
    if not tau_i < tau_f:
        raise DomainError("transition window must satisfy tau_i < tau_f")
    if switch_off not in ("sudden", "adiabatic"):
        raise DomainError(f"unknown switch_off {switch_off!r}")

    diag = {"de_excitation": spec.de_excitation, "switch_off": switch_off}
    chirp_ok = (trajectory.kind == "uniform_accel" and spec.constant_gap
                and switching.kind == "rect" and spec.gap != 0)
    if switch_off == "adiabatic" and not chirp_ok:
        raise DomainError("adiabatic switch-off needs uniform acceleration, "
                          "constant non-zero gap and rect switching")
    if chirp_ok:
        a = trajectory.accel
        chirp = ExpChirp(rate=spec.gap, amp=-omega / a, decay=a,
                         offset=omega * (trajectory.offset - 1.0 / a))
        hi = math.inf if switch_off == "adiabatic" else tau_f
        res = chirp.integral(tau_i, hi, quad)
        diag.update(res.diagnostics, route="chirp", panels=res.panels, total_phase=res.total_phase)
        return AmplitudeResult(res.value, res.abs_error, diag)

    phase_gap = spec.phase_function((tau_i, tau_f))

    def phase(tau):
        return phase_gap(tau) + omega * trajectory.q(tau)

    def dphase(tau):
        return spec.gap_rate(tau) + omega * trajectory.q_dot(tau)

    known_rate = trajectory.q_dot(np.zeros(1)) is not None

    if switching.kind == "rect":
        amp = np.ones_like
    else:
        amp = switching.eta
    integrand = OscillatoryIntegrand(amp, phase, (tau_i, tau_f), dphase if known_rate else None)
    res = integrate(integrand, quad)
    diag.update(res.diagnostics, route="quadrature", panels=res.panels, total_phase=res.total_phase)
    return AmplitudeResult(res.value, res.abs_error, diag)


def transition_amplitude(spec, trajectory, switching, mode, window=None, quad=None,
                         switch_off="sudden"):
    """First-order excitation amplitude b(omega) times :func:`amplitude_integral`."""
    b = b_coefficient(spec, mode)
    res = amplitude_integral(spec, trajectory, switching, mode, window, quad, switch_off)
    return AmplitudeResult(b * res.amplitude, abs(b) * res.abs_error, res.diagnostics)


def _sinc(x):
    return np.sinc(np.asarray(x, dtype=float) / math.pi)


def inertial_closed_form(gap, omega, k, velocity, offset, T):
    """Sinc-form inertial amplitude as quoted in the literature.

    Evaluates exp(i k x0) sinc((Omega + gamma (omega - k v)) T) / (T sqrt(pi omega)).
    Its modulus equals |A| / T^2 of the exact finite-window amplitude with
    lambda = M = 1 (see :func:`inertial_amplitude`); the phase convention of
    the x0 factor is also opposite.  Kept verbatim for comparison.
    """
    if not -1 < velocity < 1:
        raise DomainError(f"|v| must be < 1, got {velocity}")
    if not T > 0 or not omega > 0:
        raise DomainError("T and omega must be positive")
    g = 1.0 / math.sqrt(1 - velocity ** 2)
    arg = (gap + g * (omega - k * velocity)) * T
    return cmath.exp(1j * k * offset) * float(_sinc(arg)) / (T * math.sqrt(math.pi * omega))


def inertial_amplitude(spec, mode, velocity, offset, T):
    """Exact amplitude for an inertial detector switched on over [-T, T]."""
    if not -1 < velocity < 1:
        raise DomainError(f"|v| must be < 1, got {velocity}")
    if not T > 0:
        raise DomainError("T must be positive")
    if not spec.constant_gap:
        raise DomainError("inertial closed form needs a constant gap")
    omega = mode.omega
    g = 1.0 / math.sqrt(1 - velocity ** 2)
    x = spec.gap + g * (1 - velocity) * omega
    return b_coefficient(spec, mode) * cmath.exp(-1j * omega * offset) * 2 * T * float(_sinc(x * T))


def _log_expm1(x):
    return x + math.log1p(-math.exp(-x)) if x > 30 else math.log(math.expm1(x))


def _log_sinh(y):
    return y + math.log1p(-math.exp(-2 * y)) - math.log(2) if y > 20 else math.log(math.sinh(y))


def accel_closed_form(gap, omega, accel, route="planck", log=False):
    """Infinite-time |A / b(omega)|^2 for a uniformly accelerated detector.

    ``route="planck"`` uses 2 pi / (a Omega (exp(2 pi Omega / a) - 1)).
    ``route="gamma"`` uses a^-2 exp(-pi Omega/a) |Gamma(i Omega/a)|^2 with the
    reflection identity |Gamma(iy)|^2 = pi / (y sinh(pi y)).
    ``route="loggamma"`` evaluates the complex log-Gamma directly.
    The result is independent of omega.  ``log=True`` returns the natural log,
    which stays finite where the value itself underflows.
    """
    for name, val in (("gap", gap), ("omega", omega), ("accel", accel)):
        if not (val > 0 and math.isfinite(val)):
            raise DomainError(f"{name} must be positive and finite, got {val}")
    y = gap / accel
    if route == "planck":
        out = math.log(2 * math.pi) - math.log(accel * gap) - _log_expm1(2 * math.pi * y)
    elif route == "gamma":
        out = -2 * math.log(accel) - math.pi * y + math.log(math.pi) - math.log(y) - _log_sinh(math.pi * y)
    elif route == "loggamma":
        out = -2 * math.log(accel) + 2 * float(loggamma(-1j * y).real) - math.pi * y
    else:
        raise DomainError(f"unknown route {route!r}")
    return out if log else math.exp(out)


def planck_response(gap, accel):
    """Normalised thermal response x / (exp(x) - 1) with x = 2 pi Omega / a."""
    gap = np.asarray(gap, dtype=float)
    accel = np.asarray(accel, dtype=float)
    if np.any(~(gap > 0)) or np.any(~(accel > 0)):
        raise DomainError("gap and acceleration must be positive")
    x = 2 * np.pi * gap / accel
    with np.errstate(over="ignore", invalid="ignore"):
        out = np.where(
            x < 1e-8, 1 - 0.5 * x,
            np.where(x > 700, x * np.exp(-np.minimum(x, 1e300)), x / np.expm1(np.minimum(x, 700))),
        )
    return float(out) if out.ndim == 0 else out
