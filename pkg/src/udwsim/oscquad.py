"""Quadrature for oscillatory integrals  I = int_a^b g(z) exp(i phi(z)) dz.

Three evaluation routes are provided:

``integrate``
    Adaptive Gauss-Kronrod (7/15).  With ``method="auto"`` the interval is first
    cut into panels that each carry at most ``max_phase_per_panel`` radians of
    phase, so every panel is non-oscillatory from the rule's point of view.
``integrate_filon``
    Filon-type rule: on each panel the phase is linearised about the panel
    centre, the residual phase is folded into the amplitude, the amplitude is
    projected onto Legendre polynomials and the linear-phase moments are taken
    in closed form (``int P_n(t) e^{iwt} dt = 2 i^n j_n(w)``).  Panels may hold
    thousands of radians as long as the phase is close to linear on them.
``oracle_brute``
    Composite Simpson on a uniform grid.  Slow, simple, used as a test oracle.

Amplitude and phase callables must accept and return numpy arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np
from scipy.special import spherical_jn

from .errors import DomainError

__all__ = [
    "OscillatoryIntegrand",
    "QuadConfig",
    "QuadResult",
    "QuadratureError",
    "NonFiniteIntegrandError",
    "integrate",
    "integrate_filon",
    "oracle_brute",
    "oracle_richardson",
    "phase_extent",
    "antiderivative",
]

_EPS = np.finfo(float).eps

# Gauss-Kronrod 15-point nodes/weights on [-1, 1] (QUADPACK qk15), positive half.
_XGK_HALF = np.array([
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000,
])
_WGK_HALF = np.array([
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
])
_WG_HALF = np.array([
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
])
_XGK = np.concatenate([-_XGK_HALF[:-1], _XGK_HALF[::-1]])
_WGK = np.concatenate([_WGK_HALF[:-1], _WGK_HALF[::-1]])
# Gauss nodes are the odd entries of the Kronrod set.
_WG = np.zeros(15)
_WG[1::2] = np.concatenate([_WG_HALF[:-1], _WG_HALF[::-1]])

_FILON_NODES = 16
_FILON_T, _FILON_W = np.polynomial.legendre.leggauss(_FILON_NODES)
_FILON_N = np.arange(_FILON_NODES)
# _FILON_B[n, k] = P_n(t_k) * w_k
_FILON_B = np.polynomial.legendre.legvander(_FILON_T, _FILON_NODES - 1).T * _FILON_W
_FILON_SCALE = (1j ** _FILON_N) * (2 * _FILON_N + 1)
# Largest residual (non-linear) phase tolerated on one Filon panel, radians.
_FILON_RESIDUAL = 2.0


@dataclass(frozen=True)
class OscillatoryIntegrand:
    """Amplitude g(z) and phase phi(z) over ``interval = (z_lo, z_hi)``."""

    amplitude: Callable
    phase: Callable
    interval: tuple
    phase_derivative: Optional[Callable] = None

    def __post_init__(self):
        lo, hi = (float(x) for x in self.interval)
        if not (math.isfinite(lo) and math.isfinite(hi)):
            raise DomainError(f"interval must be finite, got {self.interval}")
        if hi < lo:
            raise DomainError(f"interval must satisfy z_lo <= z_hi, got {self.interval}")
        object.__setattr__(self, "interval", (lo, hi))

    @property
    def z_lo(self):
        return self.interval[0]

    @property
    def z_hi(self):
        return self.interval[1]

    def g(self, z):
        return _evaluate(self.amplitude, z, complex, "amplitude")

    def phi(self, z):
        return _evaluate(self.phase, z, float, "phase")

    def dphi(self, z):
        if self.phase_derivative is None:
            raise DomainError("integrand has no phase_derivative")
        return _evaluate(self.phase_derivative, z, float, "phase_derivative")

    def values(self, z):
        """g(z) exp(i phi(z)) at the points ``z``."""
        return self.g(z) * np.exp(1j * self.phi(z))

    def restrict(self, lo, hi):
        return replace(self, interval=(lo, hi))

    def check_phase_derivative(self, samples=64, rtol=1e-6, seed=0):
        """True if ``phase_derivative`` agrees with a central difference of ``phase``."""
        if self.phase_derivative is None:
            return False
        lo, hi = self.interval
        rng = np.random.default_rng(seed)
        width = hi - lo
        z = lo + width * (0.05 + 0.9 * rng.random(samples))
        step = 1e-5 * width
        fd = (self.phi(z + step) - self.phi(z - step)) / (2 * step)
        exact = self.dphi(z)
        scale = np.maximum(np.abs(exact), np.max(np.abs(exact)) * 1e-3 + 1e-300)
        return bool(np.all(np.abs(fd - exact) <= rtol * scale))


@dataclass(frozen=True)
class QuadConfig:
    rel_tol: float = 1e-8
    abs_tol: float = 1e-14
    max_phase_per_panel: float = math.pi / 2
    max_panels: int = 200_000
    method: str = "auto"

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise DomainError("rel_tol must be positive")
        if not self.abs_tol >= 0:
            raise DomainError("abs_tol must be non-negative")
        if not 0 < self.max_phase_per_panel <= math.pi:
            raise DomainError("max_phase_per_panel must lie in (0, pi]")
        if self.max_panels < 1:
            raise DomainError("max_panels must be at least 1")
        if self.method not in ("auto", "adaptive_gk", "filon"):
            raise DomainError(f"unknown quadrature method {self.method!r}")


@dataclass(frozen=True)
class QuadResult:
    value: complex
    abs_error: float
    panels: int
    total_phase: float
    diagnostics: dict = field(default_factory=dict)


class QuadratureError(RuntimeError):
    """Tolerance not reached; carries the best estimate obtained."""

    def __init__(self, message, value=complex("nan"), abs_error=math.inf, panels=0):
        super().__init__(message)
        self.value = value
        self.abs_error = abs_error
        self.panels = panels


class NonFiniteIntegrandError(QuadratureError):
    def __init__(self, what, location):
        super().__init__(f"non-finite {what} at z = {location!r}")
        self.location = location


def _evaluate(f, z, dtype, what):
    z = np.asarray(z, dtype=float)
    out = np.asarray(f(z), dtype=dtype)
    if out.shape != z.shape:
        out = np.broadcast_to(out, z.shape)
    bad = ~np.isfinite(out)
    if bad.any():
        raise NonFiniteIntegrandError(what, float(z[bad][0]))
    return out


def _tolerance(config, value):
    return max(config.abs_tol, config.rel_tol * abs(value))


# ---------------------------------------------------------------- panelling

def _phase_panels(integrand, budget, max_panels, initial=64):
    """Breakpoints such that each panel carries at most ``budget`` radians.

    The phase variation of a panel is estimated as |phi(m)-phi(l)| + |phi(r)-phi(m)|.
    Oversized panels are cut into equal parts until all pass; adjacent small
    panels are then merged greedily up to the budget.
    """
    lo, hi = integrand.interval
    edges = np.linspace(lo, hi, initial + 1)
    floor = 16 * _EPS * max(abs(lo), abs(hi), hi - lo)
    while True:
        left, right = edges[:-1], edges[1:]
        mid = 0.5 * (left + right)
        pe = integrand.phi(edges)
        pm = integrand.phi(mid)
        var = np.abs(pm - pe[:-1]) + np.abs(pe[1:] - pm)
        bad = (var > budget) & (right - left > floor)
        if not bad.any():
            break
        parts = np.ones(len(var), dtype=int)
        parts[bad] = np.clip(np.ceil(var[bad] / budget), 2, 64).astype(int)
        if parts.sum() > 8 * max_panels:
            raise QuadratureError(
                f"phase budget needs more than {max_panels} panels", panels=int(parts.sum()))
        pieces = [np.linspace(l, r, k + 1)[:-1] for l, r, k in zip(left[bad], right[bad], parts[bad])]
        edges = np.sort(np.concatenate([edges, *pieces]))
        edges = np.unique(edges)

    # greedy merge of consecutive panels
    keep = [0]
    acc = 0.0
    for i, v in enumerate(var.tolist()):
        if acc + v > budget and acc > 0.0:
            keep.append(i)
            acc = 0.0
        acc += v
    keep.append(len(var))
    merged = edges[np.array(keep)]
    return merged, float(var.sum())


def _residual_panels(integrand, max_panels, budget=_FILON_RESIDUAL, initial=8):
    """Breakpoints on which the phase is within ``budget`` rad of its linearisation."""
    lo, hi = integrand.interval
    edges = np.linspace(lo, hi, initial + 1)
    floor = 16 * _EPS * max(abs(lo), abs(hi), hi - lo)
    while True:
        left, right = edges[:-1], edges[1:]
        mid = 0.5 * (left + right)
        half = 0.5 * (right - left)
        pm = integrand.phi(mid)
        dm = integrand.dphi(mid)
        res = np.maximum(
            np.abs(integrand.phi(left) - pm + dm * half),
            np.abs(integrand.phi(right) - pm - dm * half),
        )
        bad = (res > budget) & (right - left > floor)
        if not bad.any():
            return edges
        if len(edges) + bad.sum() > max_panels + 1:
            raise QuadratureError(
                f"Filon panelling needs more than {max_panels} panels", panels=len(edges) - 1)
        edges = np.unique(np.concatenate([edges, mid[bad]]))


# ------------------------------------------------------------ panel rules

def _gk15(integrand, left, right):
    centre = 0.5 * (left + right)
    half = 0.5 * (right - left)
    z = centre[:, None] + half[:, None] * _XGK[None, :]
    phase = integrand.phi(z)
    f = integrand.g(z) * np.exp(1j * phase)
    kronrod = half * (f @ _WGK)
    gauss = half * (f @ _WG)
    # an evaluated phase carries an absolute rounding error of order eps |phi|
    resabs = np.abs(half) * ((np.abs(f) * np.maximum(1.0, np.abs(phase))) @ _WGK)
    noise = 50 * _EPS * resabs
    return kronrod, np.maximum(np.abs(kronrod - gauss), noise), noise


def _filon_rule(integrand, left, right):
    centre = 0.5 * (left + right)
    half = 0.5 * (right - left)
    z = centre[:, None] + half[:, None] * _FILON_T[None, :]
    phi0 = integrand.phi(centre)
    w = integrand.dphi(centre) * half
    residual = integrand.phi(z) - phi0[:, None] - w[:, None] * _FILON_T[None, :]
    amp = integrand.g(z) * np.exp(1j * residual)
    aw = np.abs(w)
    jn = spherical_jn(_FILON_N[None, :], aw[:, None])
    jn = np.where((w < 0)[:, None] & (_FILON_N % 2 == 1)[None, :], -jn, jn)
    weights = (jn * _FILON_SCALE[None, :]) @ _FILON_B
    value = half * np.exp(1j * phi0) * np.sum(weights * amp, axis=1)
    resabs = np.abs(half) * (np.abs(amp) @ _FILON_W)
    return value, resabs


# --------------------------------------------------------------- drivers

def integrate(integrand, config=None):
    """Integrate ``g exp(i phi)`` over the integrand's interval.

    ``method="auto"`` uses phase-budgeted panels followed by adaptive GK15;
    ``"adaptive_gk"`` starts adaptive GK15 from a coarse uniform grid;
    ``"filon"`` dispatches to :func:`integrate_filon`.
    """
    config = config or QuadConfig()
    if config.method == "filon":
        return integrate_filon(integrand, config)
    lo, hi = integrand.interval
    if lo == hi:
        return QuadResult(0j, 0.0, 1, 0.0, {"method": config.method, "degenerate": True})

    if config.method == "auto":
        edges, total_phase = _phase_panels(integrand, config.max_phase_per_panel, config.max_panels)
    else:
        edges = np.linspace(lo, hi, 9)
        total_phase = phase_extent(integrand, 1025)
    return _adaptive_gk(integrand, edges, config, total_phase)


def _adaptive_gk(integrand, edges, config, total_phase):
    lo, hi = integrand.interval
    left, right = edges[:-1], edges[1:]
    if len(left) > config.max_panels:
        raise QuadratureError(f"initial panelling exceeds max_panels={config.max_panels}",
                              panels=len(left))
    values, errors, noise = _gk15(integrand, left, right)
    floor = 64 * _EPS * max(abs(lo), abs(hi))
    iterations = 0
    roundoff_limited = False
    best, stalled = math.inf, 0
    while True:
        total = values.sum()
        tol = _tolerance(config, total)
        err = errors.sum()
        if err <= tol:
            break
        # three rounds without halving the error estimate: rounding noise dominates
        if err < 0.5 * best:
            best, stalled = err, 0
        else:
            stalled += 1
            if stalled >= 3:
                roundoff_limited = True
                break
        share = tol * (right - left) / (hi - lo)
        # panels already at their rounding floor gain nothing from bisection
        split = (errors > share) & (errors > noise) & (right - left > floor)
        if not split.any():
            roundoff_limited = True
            break
        if len(left) + split.sum() > config.max_panels:
            raise QuadratureError(
                f"adaptive GK exceeded max_panels={config.max_panels} "
                f"(error {err:.3g} > tolerance {tol:.3g})",
                value=complex(total), abs_error=float(err), panels=len(left))
        mid = 0.5 * (left[split] + right[split])
        new_left = np.concatenate([left[split], mid])
        new_right = np.concatenate([mid, right[split]])
        new_values, new_errors, new_noise = _gk15(integrand, new_left, new_right)
        keep = ~split
        left = np.concatenate([left[keep], new_left])
        right = np.concatenate([right[keep], new_right])
        values = np.concatenate([values[keep], new_values])
        errors = np.concatenate([errors[keep], new_errors])
        noise = np.concatenate([noise[keep], new_noise])
        iterations += 1
    return QuadResult(
        complex(values.sum()), float(errors.sum()), len(left), total_phase,
        {"method": "adaptive_gk" if config.method != "auto" else "auto",
         "iterations": iterations, "roundoff_limited": roundoff_limited},
    )


def integrate_filon(integrand, config=None):
    """Filon-type integration with per-panel linearised phase.

    Needs ``phase_derivative``; without it the whole integral falls back to
    :func:`integrate`.  Panels on which phi' changes sign (checked at the ends
    and the midpoint) are handed to adaptive GK and counted in
    ``diagnostics["stationary_panels"]``.
    """
    config = config or QuadConfig()
    gk_config = replace(config, method="auto")
    if integrand.phase_derivative is None:
        res = integrate(integrand, gk_config)
        return replace(res, diagnostics={**res.diagnostics, "method": "filon",
                                         "fallback": "no_phase_derivative"})
    lo, hi = integrand.interval
    if lo == hi:
        return QuadResult(0j, 0.0, 1, 0.0, {"method": "filon", "degenerate": True})

    edges = _residual_panels(integrand, config.max_panels)
    left, right = edges[:-1], edges[1:]
    mid = 0.5 * (left + right)
    sl, sm, sr = (np.sign(integrand.dphi(x)) for x in (left, mid, right))
    stationary = (sl != sm) | (sm != sr) | (sm == 0)

    fixed_value = 0j
    fixed_error = 0.0
    fixed_panels = 0
    for a, b in zip(left[stationary], right[stationary]):
        res = integrate(integrand.restrict(a, b), gk_config)
        fixed_value += res.value
        fixed_error += res.abs_error
        fixed_panels += res.panels
    left, right = left[~stationary], right[~stationary]

    floor = 64 * _EPS * max(abs(lo), abs(hi))
    done_value = 0j
    done_error = 0.0
    done_panels = 0
    estimate = None
    iterations = 0
    while len(left):
        centre = 0.5 * (left + right)
        whole, _ = _filon_rule(integrand, left, right)
        lhalf, labs = _filon_rule(integrand, left, centre)
        rhalf, rabs = _filon_rule(integrand, centre, right)
        halves = lhalf + rhalf
        noise = 50 * _EPS * (labs + rabs)
        errors = np.maximum(np.abs(whole - halves), noise)
        if estimate is None:
            estimate = fixed_value + halves.sum()
        tol = _tolerance(config, estimate)
        share = tol * (right - left) / (hi - lo)
        accept = (errors <= share) | (errors <= noise) | (right - left <= floor)
        done_value += halves[accept].sum()
        done_error += errors[accept].sum()
        done_panels += 2 * int(accept.sum())
        if accept.all():
            break
        pending = len(left) - int(accept.sum())
        if done_panels + fixed_panels + 2 * pending > config.max_panels:
            best = done_value + fixed_value + halves[~accept].sum()
            raise QuadratureError(
                f"Filon refinement exceeded max_panels={config.max_panels}",
                value=complex(best), abs_error=float(done_error + fixed_error + errors[~accept].sum()),
                panels=done_panels + fixed_panels + 2 * pending)
        left, right, centre = left[~accept], right[~accept], centre[~accept]
        left, right = np.concatenate([left, centre]), np.concatenate([centre, right])
        iterations += 1

    value = complex(done_value + fixed_value)
    return QuadResult(
        value, float(done_error + fixed_error), max(done_panels + fixed_panels, 1),
        float(np.abs(np.diff(integrand.phi(edges))).sum()),
        {"method": "filon", "stationary_panels": int(stationary.sum()), "iterations": iterations},
    )


def oracle_brute(integrand, panels):
    """Composite Simpson rule with ``panels`` (even) uniform panels."""
    panels = int(panels)
    if panels < 2 or panels % 2:
        raise DomainError("Simpson oracle needs an even number of panels >= 2")
    lo, hi = integrand.interval
    if lo == hi:
        return 0j
    h = (hi - lo) / panels
    total = 0j
    chunk = 1 << 20
    for start in range(0, panels + 1, chunk):
        k = np.arange(start, min(start + chunk, panels + 1))
        z = lo + k * h
        z[k == panels] = hi
        w = np.where(k % 2 == 1, 4.0, 2.0)
        w[(k == 0) | (k == panels)] = 1.0
        total += np.sum(w * integrand.values(z))
    return complex(total * h / 3)


def oracle_richardson(integrand, panels):
    """Simpson at ``panels`` and ``2*panels`` combined by Richardson extrapolation."""
    coarse = oracle_brute(integrand, panels)
    fine = oracle_brute(integrand, 2 * panels)
    return (16 * fine - coarse) / 15


def phase_extent(integrand, samples):
    """Total variation of phi estimated on ``samples`` equispaced points."""
    if samples < 2:
        raise DomainError("phase_extent needs at least 2 samples")
    z = np.linspace(*integrand.interval, int(samples))
    return float(np.abs(np.diff(integrand.phi(z))).sum())


def antiderivative(f, lo, hi, origin=0.0, max_degree=4096):
    """Callable z -> int_origin^z f, valid on [min(lo, origin), max(hi, origin)].

    Built from a Chebyshev interpolant whose degree is doubled until the
    trailing coefficients fall below 1e-14 of the largest; ``f`` must be smooth.
    """
    a, b = min(lo, origin), max(hi, origin)
    if a == b:
        return lambda z: np.zeros_like(np.asarray(z, dtype=float))
    degree = 32
    while True:
        poly = np.polynomial.Chebyshev.interpolate(f, degree, domain=[a, b])
        coef = np.abs(poly.coef)
        if coef[-8:].max() <= 1e-14 * coef.max() or degree >= max_degree:
            break
        degree *= 2
    prim = poly.integ(lbnd=origin)
    return lambda z: prim(np.asarray(z, dtype=float))
