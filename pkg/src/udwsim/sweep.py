"""Acceleration x crystal-length sweep of the normalised SPDC excitation probability."""

from __future__ import annotations

import csv
import io
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .dispersion import ktp_operating_point
from .errors import DomainError
from .oscquad import QuadConfig, QuadratureError
from .spdc import poled_reference, uniform_accel_amplitude
from .udw import planck_response

__all__ = [
    "DEFAULT_LENGTHS_UM",
    "DEFAULT_A_POINTS",
    "DEFAULT_X_RANGE",
    "SweepRow",
    "SweepResult",
    "default_accelerations",
    "fig2_sweep",
]

DEFAULT_LENGTHS_UM = (5.0, 10.0, 25.0, 50.0, 100.0)
DEFAULT_A_POINTS = 60
# range of 2 pi Omega / a covered by the default acceleration grid
DEFAULT_X_RANGE = (0.05, 50.0)

CSV_COLUMNS = ("L_um", "a_per_s", "x_2pi_gap_over_a", "probability", "abs_error",
               "planck_reference", "status")


@dataclass(frozen=True)
class SweepRow:
    length_um: float
    accel: float
    x: float
    probability: float
    abs_error: float
    planck: float
    status: str = "ok"


@dataclass(frozen=True)
class SweepResult:
    rows: tuple
    runtimes_ms: tuple
    gap: float
    references: dict = field(default_factory=dict)

    def curve(self, length_um):
        rows = [r for r in self.rows if r.length_um == length_um]
        return (np.array([r.accel for r in rows]), np.array([r.probability for r in rows]))

    def csv_text(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for r in self.rows:
            writer.writerow([_fmt(r.length_um), _fmt(r.accel), _fmt(r.x), _fmt(r.probability),
                             _fmt(r.abs_error), _fmt(r.planck), r.status])
        return buf.getvalue()

    def timings_text(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(("L_um", "a_per_s", "runtime_ms"))
        for r, t in zip(self.rows, self.runtimes_ms):
            writer.writerow([_fmt(r.length_um), _fmt(r.accel), f"{t:.3f}"])
        return buf.getvalue()


def _fmt(x):
    return format(float(x), ".17g")


def default_accelerations(gap, points=DEFAULT_A_POINTS, x_range=DEFAULT_X_RANGE):
    """Accelerations (1/s), ascending, log-spaced so 2 pi gap / a spans ``x_range``."""
    if points < 2:
        raise DomainError("need at least two acceleration points")
    x = np.geomspace(x_range[1], x_range[0], int(points))
    return 2 * math.pi * gap / x


def _evaluate(item):
    length_um, accel, omega_tilde, d_omega, v, gap, quad, limit_um = item
    start = time.perf_counter()
    length = length_um * 1e-6
    x = 2 * math.pi * gap / accel
    planck = float(planck_response(gap, accel))
    try:
        res = uniform_accel_amplitude(omega_tilde, d_omega, accel, v, -0.5 * length, 0.5 * length,
                                      quad, length_limit=None if limit_um is None else limit_um * 1e-6)
        row = SweepRow(length_um, accel, x, res.probability, res.probability_error, planck)
    except (QuadratureError, DomainError) as exc:
        row = SweepRow(length_um, accel, x, math.nan, math.nan, planck,
                       f"error: {type(exc).__name__}: {exc}".replace("\n", " "))
    return row, 1e3 * (time.perf_counter() - start)


def fig2_sweep(lengths_um=DEFAULT_LENGTHS_UM, accelerations=None, workers=1,
               operating_point=None, quad=None, length_limit_um=100.0):
    """Normalised probability |A'/(kappa eta L)|^2 on a centred crystal for every (L, a).

    Rows come back sorted by (L, a) whatever the worker count; a failing point
    is recorded in its row's ``status`` and the sweep continues.  Lengths above
    ``length_limit_um`` (None to lift the cap) are reported as errors.
    """
    lengths_um = tuple(float(x) for x in lengths_um)
    if not lengths_um:
        raise DomainError("length list is empty")
    if any(not x > 0 for x in lengths_um):
        raise DomainError("crystal lengths must be positive")
    op = operating_point or ktp_operating_point()
    gap = op.gap
    if accelerations is None:
        accelerations = default_accelerations(gap)
    accelerations = tuple(float(a) for a in accelerations)
    if not accelerations or any(not a > 0 for a in accelerations):
        raise DomainError("accelerations must be a non-empty list of positive values")
    quad = quad or QuadConfig()
    items = [(L, a, op.omega_tilde, op.omega1, op.v, gap, quad, length_limit_um)
             for L in sorted(set(lengths_um)) for a in sorted(set(accelerations))]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            out = list(pool.map(_evaluate, items, chunksize=max(1, len(items) // (4 * workers))))
    else:
        out = [_evaluate(it) for it in items]
    out.sort(key=lambda pair: (pair[0].length_um, pair[0].accel))
    poled = poled_reference(op.delta_k0, op.poling_period, max(lengths_um) * 1e-6)
    refs = {
        "two_over_pi": poled.two_over_pi,
        "two_over_pi_squared": poled.two_over_pi_squared,
        "poled_amplitude_at_max_L": poled.amplitude,
        "poled_probability_at_max_L": poled.probability,
        "sinc2_limit": {str(L): float(np.sinc(op.delta_k0 * L * 1e-6 / 2 / math.pi) ** 2) for L in lengths_um},
    }
    return SweepResult(tuple(r for r, _ in out), tuple(t for _, t in out), gap, refs)
