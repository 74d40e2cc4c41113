"""Integrals of exp(i phi) for the exponential chirp

    phi(x) = offset + rate * x + amp * expm1(-decay * x).

This phase appears both for a uniformly accelerated detector coupled to a
right-moving mode and for a waveguide whose relative inverse group velocity
decays exponentially.  On the *fast* side (u = |amp| exp(-decay x) -> inf) the
phase frequency grows exponentially and the tail is summed in closed form with
the asymptotic expansion of the incomplete gamma function.  On the *slow* side
the integrand tends to exp(i rate x); that tail is assigned its Abel value
(adiabatic switch-off) via a convergent power series.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.special import loggamma

from .errors import DomainError
from .oscquad import OscillatoryIntegrand, QuadConfig, QuadResult, integrate

__all__ = ["ExpChirp"]

_MAX_TERMS = 400


@dataclass(frozen=True)
class ExpChirp:
    rate: float
    amp: float
    decay: float
    offset: float = 0.0

    def __post_init__(self):
        if self.decay == 0 or not math.isfinite(self.decay):
            raise DomainError("decay must be finite and non-zero")
        if self.amp == 0:
            raise DomainError("amp must be non-zero")

    def phase(self, x):
        return self.offset + self.rate * x + self.amp * np.expm1(-self.decay * np.asarray(x, float))

    def phase_derivative(self, x):
        return self.rate - self.amp * self.decay * np.exp(-self.decay * np.asarray(x, float))

    def u(self, x):
        with np.errstate(over="ignore"):
            return abs(self.amp) * np.exp(-self.decay * np.asarray(x, float))

    @property
    def s(self):
        return -1j * self.rate / self.decay

    def cut_point(self, u_cut):
        """Position at which u equals ``u_cut``."""
        return -math.log(u_cut / abs(self.amp)) / self.decay

    def default_cut(self):
        return max(1e3, 100 * abs(self.s))

    def fast_tail(self, x):
        """Integral from the fast end to ``x``, with an error bound.

        For decay > 0 this is the integral over (-inf, x]; for decay < 0 over
        [x, +inf).  Requires u(x) large compared to 1 and |s|.
        """
        u = float(self.u(x))
        if math.isinf(u):
            return 0j, 0.0
        sigma = 1.0 if self.amp > 0 else -1.0
        s = self.s
        term = 1 + 0j
        total = term
        last = abs(term)
        for k in range(1, _MAX_TERMS):
            term = term * (-(s - k) / (1j * sigma * u))
            mag = abs(term)
            if mag >= last:
                break
            total += term
            last = mag
            if mag < 1e-17 * abs(total):
                break
        if abs(-(s - 1) / (1j * sigma * u)) > 0.25:
            raise DomainError(f"fast-tail expansion used too close to the slow region (u={u:.3g})")
        dphi = float(self.phase_derivative(x)) - self.rate
        pref = cmath.exp(1j * float(self.phase(x))) / (1j * dphi)
        sign = 1.0 if self.decay > 0 else -1.0
        return sign * pref * total, abs(pref) * last

    def slow_tail(self, x):
        """Abel-regularised integral from ``x`` to the slow end."""
        if self.rate == 0:
            raise DomainError("slow tail diverges for rate == 0")
        u = float(self.u(x))
        if u > 60:
            raise DomainError(f"slow-tail series needs u <= 60, got {u:.3g}")
        # exp(i phi) = exp(i(offset - amp)) * sum_n (i amp)^n / n! * exp((i rate - n decay) x)
        base = cmath.exp(1j * (self.offset - self.amp))
        total = 0j
        term_coef = 1 + 0j
        for n in range(_MAX_TERMS):
            if n:
                term_coef *= 1j * self.amp / n
            expo = complex(-n * self.decay * x, self.rate * x)
            denom = n * self.decay - 1j * self.rate
            if self.decay < 0:
                denom = -denom
            t = term_coef * cmath.exp(expo) / denom
            total += t
            if n > 2 * u + 5 and abs(t) < 1e-17 * max(abs(total), 1e-300):
                break
        return base * total

    def integral(self, lo, hi, config=None, u_cut=None):
        """Integral of exp(i phi) over [lo, hi]; either end may be infinite.

        An infinite end on the slow side is Abel-regularised.  The fast side,
        finite or not, is closed analytically beyond u = ``u_cut``.
        """
        config = config or QuadConfig()
        if not lo <= hi:
            raise DomainError("integral needs lo <= hi")
        u_cut = u_cut or self.default_cut()
        x_cut = self.cut_point(u_cut)
        fast_left = self.decay > 0
        fast_end, slow_end = (lo, hi) if fast_left else (hi, lo)

        tail = 0j
        tail_err = 0.0
        a, b = lo, hi
        # Fast side beyond the cut.
        if (fast_left and lo < x_cut) or (not fast_left and hi > x_cut):
            if (fast_left and hi <= x_cut) or (not fast_left and lo >= x_cut):
                v1, e1 = self.fast_tail(hi if fast_left else lo)
                v0, e0 = self.fast_tail(fast_end) if math.isfinite(fast_end) else (0j, 0.0)
                return QuadResult(v1 - v0, e1 + e0, 0, 0.0, {"method": "chirp_closed"})
            vc, ec = self.fast_tail(x_cut)
            v0, e0 = self.fast_tail(fast_end) if math.isfinite(fast_end) else (0j, 0.0)
            tail += vc - v0
            tail_err += ec + e0
            if fast_left:
                a = x_cut
            else:
                b = x_cut
        elif not math.isfinite(fast_end):
            raise DomainError("fast end infinite but cut lies outside the interval")

        # Slow side at infinity: stop numerics where u is modest.
        if not math.isfinite(slow_end):
            x_slow = self.cut_point(min(1.0, u_cut))
            if fast_left:
                x_slow = max(x_slow, a)
                tail += self.slow_tail(x_slow)
                b = x_slow
            else:
                x_slow = min(x_slow, b)
                tail += self.slow_tail(x_slow)
                a = x_slow

        if not (math.isfinite(a) and math.isfinite(b)):
            raise DomainError("integration window did not close")
        core = OscillatoryIntegrand(
            lambda x: np.ones_like(x), self.phase, (a, b), self.phase_derivative)
        res = integrate(core, replace(config, abs_tol=max(config.abs_tol, 1e-3 * tail_err)))
        return QuadResult(
            res.value + tail, res.abs_error + tail_err, res.panels, res.total_phase,
            {**res.diagnostics, "tail": tail, "tail_error": tail_err, "window": (a, b)},
        )

    def full_line(self):
        """Abel-regularised integral over the whole real line, via the Gamma function.

        With x -> u substitution the integral is
        exp(i(offset-amp)) / |decay| * |amp|^{i rate/decay} * Gamma(s) * exp(i sigma pi s / 2).
        """
        s = self.s
        sigma = 1.0 if self.amp > 0 else -1.0
        log_val = (1j * (self.offset - self.amp) - math.log(abs(self.decay))
                   + (1j * self.rate / self.decay) * math.log(abs(self.amp))
                   + complex(loggamma(s)) + 1j * sigma * math.pi * s / 2)
        return cmath.exp(log_val)
