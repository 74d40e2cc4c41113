"""Translation between detector parameters and waveguide parameters.

A scaling velocity v turns waveguide position into detector proper time,
z = v tau.  Under that change of variables

    q(tau)     = int 1/dvg(zeta) dzeta up to v tau
    eta(tau)   = v * chi2(v tau) / sqrt(n1 n2 n3)
    Omega(tau) = v * (dk0(v tau) - (Omega3 - Omega2) / dvg(v tau))
    b(omega)   = i kappa alpha(Omega2 + omega)
    dtau       = L / v

and the SPDC integral over z equals the detector integral over tau.  Note that
eta picks up a factor v, so it is not dimensionless; the dimensionless
combination is eta * lambda with lambda = 1/v (see :attr:`UdwSide.eta_lambda`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import DomainError
from .oscquad import QuadConfig, antiderivative
from .spdc import b_s, spdc_amplitude
from .udw import DetectorSpec, SwitchingFunction, Trajectory, amplitude_integral

__all__ = [
    "ScalingVelocity",
    "UdwSide",
    "SpdcSide",
    "EquivalenceReport",
    "spdc_to_udw",
    "udw_to_spdc",
    "amplitude_equivalence_check",
]

_RANGE_SLACK = 1e-12


@dataclass(frozen=True)
class ScalingVelocity:
    v: float

    def __post_init__(self):
        if not (self.v > 0 and math.isfinite(self.v)):
            raise DomainError(f"scaling velocity must be positive and finite, got {self.v}")

    def duration(self, length):
        return length / self.v

    def length(self, duration):
        return duration * self.v


def _guard(f, lo, hi):
    slack = _RANGE_SLACK * max(abs(lo), abs(hi), hi - lo)

    def wrapped(x):
        x = np.asarray(x, dtype=float)
        if np.any(x < lo - slack) or np.any(x > hi + slack):
            raise DomainError(f"argument outside the mapped window [{lo}, {hi}]")
        return f(x)

    return wrapped


@dataclass(frozen=True)
class UdwSide:
    """Detector-side functions of proper time on [tau_i, tau_f]."""

    q: Callable
    q_dot: Optional[Callable]
    eta: Callable
    gap: Callable
    b: Callable
    tau_i: float
    tau_f: float
    gap_phase: Optional[Callable] = None

    @property
    def duration(self):
        return self.tau_f - self.tau_i

    def eta_lambda(self, tau, coupling):
        """Dimensionless switching-times-coupling group."""
        return coupling * np.asarray(self.eta(tau))

    def detector(self):
        return DetectorSpec(self.gap, gap_phase=self.gap_phase)

    def trajectory(self):
        return Trajectory.custom(self.q, self.q_dot)

    def switching(self):
        return SwitchingFunction.custom(self.eta)

    def amplitude(self, omega, quad=None):
        res = amplitude_integral(self.detector(), self.trajectory(), self.switching(), omega,
                                 (self.tau_i, self.tau_f), quad)
        b = self.b(omega)
        return b * res.amplitude, abs(b) * res.abs_error, res


@dataclass(frozen=True)
class SpdcSide:
    """Waveguide-side functions of position on [z_i, z_f] plus the pump context."""

    inv_group_velocity: Callable
    eta_tilde: Callable
    delta_k0: Callable
    b: Callable
    z_i: float
    z_f: float
    omega2: float
    omega3: float
    delta_k0_integral: Optional[Callable] = None
    q_integral: Optional[Callable] = None

    @property
    def length(self):
        return self.z_f - self.z_i

    @property
    def pump_filter_diff(self):
        return self.omega3 - self.omega2

    @classmethod
    def from_scenario(cls, scenario):
        wg = scenario.waveguide
        medium = scenario.medium
        phase_k, q_tilde = medium.primitives((wg.z_i, wg.z_f))
        return cls(
            inv_group_velocity=medium.inv_group_velocity,
            eta_tilde=scenario.eta_tilde,
            delta_k0=medium.delta_k0,
            b=lambda omega: b_s(scenario, omega),
            z_i=wg.z_i, z_f=wg.z_f,
            omega2=scenario.omega2, omega3=scenario.omega3,
            delta_k0_integral=phase_k, q_integral=q_tilde,
        )


def spdc_to_udw(spdc, v, q_origin=None):
    """Detector description of a waveguide.

    ``q_origin`` is the position where q vanishes; the default z_i gives
    q(tau_i) = 0.  The gap phase is accumulated from tau = 0.
    """
    v = v.v if isinstance(v, ScalingVelocity) else ScalingVelocity(v).v
    z_i, z_f = spdc.z_i, spdc.z_f
    tau_i, tau_f = z_i / v, z_f / v
    d = spdc.pump_filter_diff
    q_int = spdc.q_integral or antiderivative(spdc.inv_group_velocity, z_i, z_f)
    k_int = spdc.delta_k0_integral or antiderivative(spdc.delta_k0, z_i, z_f)
    origin = z_i if q_origin is None else float(q_origin)
    q_ref = float(q_int(np.array(origin)))

    def q(tau):
        return q_int(v * np.asarray(tau, dtype=float)) - q_ref

    def q_dot(tau):
        return v * spdc.inv_group_velocity(v * np.asarray(tau, dtype=float))

    def eta(tau):
        return v * np.asarray(spdc.eta_tilde(v * np.asarray(tau, dtype=float)), dtype=float)

    def gap(tau):
        z = v * np.asarray(tau, dtype=float)
        return v * (spdc.delta_k0(z) - spdc.inv_group_velocity(z) * d)

    def gap_phase(tau):
        z = v * np.asarray(tau, dtype=float)
        return k_int(z) - d * q_int(z)

    return UdwSide(
        q=_guard(q, tau_i, tau_f), q_dot=_guard(q_dot, tau_i, tau_f), eta=_guard(eta, tau_i, tau_f),
        gap=_guard(gap, tau_i, tau_f), b=spdc.b, tau_i=tau_i, tau_f=tau_f,
        gap_phase=_guard(gap_phase, tau_i, tau_f),
    )


def _udw_primitives(udw, v, d):
    """int_0^z dk0 and int_0^z 1/dvg from q and the gap phase, when both are known at 0."""
    if udw.gap_phase is None or not udw.tau_i <= 0 <= udw.tau_f:
        return None, None
    q0 = float(udw.q(np.array(0.0)))

    def q_integral(z):
        return udw.q(np.asarray(z, dtype=float) / v) - q0

    def k_integral(z):
        return udw.gap_phase(np.asarray(z, dtype=float) / v) + d * q_integral(z)

    return k_integral, q_integral


def udw_to_spdc(udw, v, omega2, omega3):
    """Waveguide description of a detector; inverse of :func:`spdc_to_udw`.

    The relative inverse group velocity is q'(z/v)/v, so that its integral
    over z reproduces q.  The index normalisation is folded into eta.
    """
    if udw.q_dot is None:
        raise DomainError("udw_to_spdc needs the derivative of q")
    v = v.v if isinstance(v, ScalingVelocity) else ScalingVelocity(v).v
    d = omega3 - omega2
    if not d > 0 or not omega2 > 0:
        raise DomainError("need 0 < Omega2 < Omega3")
    z_i, z_f = v * udw.tau_i, v * udw.tau_f

    def inv_vg(z):
        return udw.q_dot(np.asarray(z, dtype=float) / v) / v

    def delta_k0(z):
        z = np.asarray(z, dtype=float)
        return udw.gap(z / v) / v + inv_vg(z) * d

    def eta_tilde(z):
        return np.asarray(udw.eta(np.asarray(z, dtype=float) / v), dtype=float) / v

    k_integral, q_integral = _udw_primitives(udw, v, d)
    return SpdcSide(inv_vg, eta_tilde, delta_k0, udw.b, z_i, z_f, float(omega2), float(omega3),
                    k_integral, q_integral)


@dataclass(frozen=True)
class EquivalenceReport:
    spdc_value: complex
    udw_value: complex
    spdc_error: float
    udw_error: float
    rel_diff: float

    @property
    def combined_error(self):
        return self.spdc_error + self.udw_error

    def within(self, rel):
        return self.rel_diff <= rel


def amplitude_equivalence_check(scenario, v=None, omega=None, quad=None):
    """Evaluate A_S directly and through the mapped detector integral.

    The detector side is integrated as a generic custom trajectory, so the two
    values come from different code paths (and, for exponential gradients,
    different algorithms).  q is referenced at z = 0 on both sides.
    """
    quad = quad or QuadConfig(rel_tol=1e-11)
    omega = scenario.omega1 if omega is None else float(omega)
    if v is None:
        v_inv = getattr(scenario.medium, "v_inv", None)
        if v_inv is None:
            raise DomainError("scaling velocity required for this medium")
        v = 1.0 / v_inv
    direct = spdc_amplitude(scenario, omega, quad)
    side = SpdcSide.from_scenario(scenario)
    udw = spdc_to_udw(side, v, q_origin=0.0)
    mapped, mapped_err, _ = udw.amplitude(omega, quad)
    scale = max(abs(direct.amplitude), abs(mapped))
    rel = 0.0 if scale == 0 else abs(direct.amplitude - mapped) / scale
    return EquivalenceReport(direct.amplitude, mapped, direct.abs_error, mapped_err, rel)
