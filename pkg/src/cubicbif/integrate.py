"""Deterministic fixed-step RK4 integration, forward and backward.

Backward integration is RK4 applied to the time-reversed field (equivalently,
a negative step).  Escape (finite-time blow-up) is declared at |x| >= x_max or
a non-finite value; backward blow-up is genuine for the coercive cubic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import backend as _backend
from ._pack import pack_field
from .errors import EscapeError, NumericsError
from .field import CubicField, eval_field

__all__ = ["Trajectory", "rk4_integrate", "rk4_generic", "order_check",
           "DEFAULT_H", "DEFAULT_X_MAX"]

DEFAULT_H = 2.0 ** -10
DEFAULT_X_MAX = 1.0e6
_RESYNC_STEPS = 2048


@lru_cache(maxsize=128)
def _packed(field: CubicField):
    return pack_field(field)


@dataclass(frozen=True)
class Trajectory:
    """Uniformly sampled solution path.

    Samples sit at t0 + i*stride*h in the travel direction and always satisfy
    |x| < x_max; an escaped trajectory's samples end at the escape step and
    `escape_x` holds the last value before the blow-up step.
    """

    t0: float
    h: float
    direction: str  # "forward" | "backward"
    stride: int
    samples: np.ndarray
    status: str  # "completed" | "escaped"
    final_t: float
    final_x: float
    escape_time: float | None = None
    escape_x: float | None = None

    @property
    def sign(self) -> int:
        return 1 if self.direction == "forward" else -1

    def times(self) -> np.ndarray:
        return self.t0 + self.sign * self.h * self.stride * np.arange(self.samples.size)


@dataclass
class DriveOut:
    """Raw multi-state kernel output (kernel step order)."""

    finals: np.ndarray
    status: np.ndarray
    event_step: np.ndarray
    event_x: np.ndarray
    event_xprev: np.ndarray
    samples: np.ndarray
    cells: np.ndarray
    t0: float
    h_signed: float
    n_steps: int

    def event_time(self, q: int) -> float:
        return self.t0 + self.h_signed * self.event_step[q]


def _steps_between(t0: float, t1: float, h: float) -> tuple[int, float, float]:
    """(n_full_steps, signed_h, remainder >= 0) covering [t0, t1]."""
    span = t1 - t0
    sgn = 1.0 if span >= 0 else -1.0
    n = int(math.floor(abs(span) / h + 1e-9))
    rem = abs(span) - n * h
    if rem < 1e-9 * max(1.0, abs(span)):
        rem = 0.0
    return n, sgn * h, rem


def _exact_steps(t_from: float, t_to: float, h_signed: float, what: str) -> int:
    k = (t_to - t_from) / h_signed
    ki = round(k)
    if ki < 0 or abs(k - ki) > 1e-6:
        raise NumericsError(f"{what} not aligned to the step grid (offset {k - ki})")
    return ki


def drive_states(field: CubicField, eps: float, t0: float, x0s, t1: float, *,
                 h: float = DEFAULT_H,
                 record: tuple[float, float, int] | None = None,
                 accumulate: tuple[float, float, int] | None = None,
                 x_max: float = DEFAULT_X_MAX,
                 stop_below: float | None = None,
                 which_backend: str | None = None) -> DriveOut:
    """Integrate several states of one equation in a single pass.

    record = (t_first, dt, n): sample every state at t_first + i*dt (travel
    direction).  accumulate = (t_first, dt, n): per-cell composite-Simpson
    integrals of the field's x-derivative along each state, cells of width dt.
    Both grids must align with the step grid; dt must be an even step multiple.
    """
    if h <= 0.0 or not math.isfinite(h):
        raise NumericsError(f"invalid step h={h}")
    X = np.atleast_1d(np.asarray(x0s, dtype=np.float64)).copy()
    if not np.all(np.isfinite(X)):
        raise NumericsError("non-finite initial value")
    n_steps, h_signed, rem = _steps_between(t0, t1, h)
    if rem != 0.0:
        raise NumericsError("drive_states requires a step-aligned window")

    m = X.size
    if record is not None:
        rec_t, rec_dt, n_rec = record
        rec_start = _exact_steps(t0, rec_t, h_signed, "record start")
        rec_stride = _exact_steps(0.0, rec_dt, h, "record spacing")
    else:
        rec_start, rec_stride, n_rec = 0, 1, 0
    if accumulate is not None:
        acc_t, acc_dt, n_cells = accumulate
        acc_start = _exact_steps(t0, acc_t, h_signed, "accumulation start")
        acc_cell = _exact_steps(0.0, acc_dt, h, "accumulation cell")
        if acc_cell % 2 or acc_cell < 2:
            raise NumericsError("accumulation cell must be an even number of steps")
    else:
        acc_start, acc_cell, n_cells = 0, 2, 0

    samples = np.full((m, n_rec), np.nan)
    cells = np.zeros((m, n_cells))
    status = np.zeros(m, dtype=np.int8)
    event_step = np.full(m, -1, dtype=np.int64)
    event_x = np.full(m, np.nan)
    event_xprev = np.full(m, np.nan)

    pack = _packed(field)
    kern = _backend.get_kernels(which_backend)
    kern.drive(pack.osc_freq, pack.osc_phase, pack.osc_iscos,
               pack.consts, pack.term_amp, pack.term_osc, pack.role_off, pack.ratio_s,
               float(eps), float(t0), h_signed, n_steps, X,
               rec_start, rec_stride, samples,
               acc_start, acc_cell, cells,
               float(x_max), float("nan") if stop_below is None else float(stop_below),
               _RESYNC_STEPS,
               status, event_step, event_xprev, event_x)
    cells *= h / 3.0  # composite-Simpson scaling
    return DriveOut(X, status, event_step, event_x, event_xprev, samples, cells,
                    t0, h_signed, n_steps)


def rk4_integrate(field: CubicField, eps: float, t0: float, x0: float, t_end: float,
                  h: float = DEFAULT_H, stride: int | None = None,
                  x_max: float = DEFAULT_X_MAX) -> Trajectory:
    """Classical RK4 with constant step; the final partial step is shortened to
    land exactly on t_end.  Escape sets the trajectory status."""
    if h <= 0.0 or not math.isfinite(h):
        raise NumericsError(f"invalid step h={h}")
    if not (math.isfinite(x0) and math.isfinite(t0) and math.isfinite(t_end)):
        raise NumericsError("non-finite input")
    if abs(x0) >= x_max:
        raise NumericsError(f"|x0| >= x_max ({x0})")
    direction = "backward" if t_end < t0 else "forward"
    if t_end == t0:
        return Trajectory(t0, h, "forward", 1, np.array([x0]), "completed", t0, x0)
    if stride is None:
        stride = max(1, round(1.0 / h))
    n_steps, h_signed, rem = _steps_between(t0, t_end, h)
    n_rec = n_steps // stride + 1
    out = drive_states(field, eps, t0, [x0], t0 + h_signed * n_steps, h=h,
                       record=(t0, stride * h, n_rec), x_max=x_max)
    x = float(out.finals[0])
    samples = out.samples[0]
    if out.status[0] == 1:
        esc_step = int(out.event_step[0])
        esc_t = t0 + h_signed * esc_step
        samples = samples[: (esc_step - 1) // stride + 1]
        return Trajectory(t0, h, direction, stride, samples, "escaped",
                          esc_t, float(out.event_x[0]),
                          escape_time=esc_t, escape_x=float(out.event_xprev[0]))
    if rem > 0.0:
        x_prev = x
        x = _rk4_partial(field, eps, t0 + h_signed * n_steps, x, math.copysign(rem, h_signed))
        if not math.isfinite(x) or abs(x) >= x_max:
            return Trajectory(t0, h, direction, stride, samples, "escaped",
                              t_end, x, escape_time=t_end, escape_x=x_prev)
    return Trajectory(t0, h, direction, stride, samples, "completed", t_end, x)


def _rk4_partial(field: CubicField, eps: float, t: float, x: float, h_signed: float) -> float:
    k1 = eval_field(field, eps, t, x)
    k2 = eval_field(field, eps, t + 0.5 * h_signed, x + 0.5 * h_signed * k1)
    k3 = eval_field(field, eps, t + 0.5 * h_signed, x + 0.5 * h_signed * k2)
    k4 = eval_field(field, eps, t + h_signed, x + h_signed * k3)
    return x + (h_signed / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)


def rk4_generic(fn, t0: float, x0: float, t_end: float, h: float,
                x_max: float = DEFAULT_X_MAX) -> Trajectory:
    """Plain-Python RK4 for arbitrary scalar fields fn(t, x); oracle/testing path."""
    if h <= 0.0:
        raise NumericsError(f"invalid step h={h}")
    direction = "backward" if t_end < t0 else "forward"
    if t_end == t0:
        return Trajectory(t0, h, "forward", 1, np.array([x0]), "completed", t0, x0)
    n_steps, hs, rem = _steps_between(t0, t_end, h)
    xs = [x0]
    x = x0
    for k in range(n_steps + (1 if rem > 0.0 else 0)):
        step = hs if k < n_steps else math.copysign(rem, hs)
        t = t0 + hs * min(k, n_steps)
        k1 = fn(t, x)
        k2 = fn(t + 0.5 * step, x + 0.5 * step * k1)
        k3 = fn(t + 0.5 * step, x + 0.5 * step * k2)
        k4 = fn(t + step, x + step * k3)
        xn = x + (step / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)
        if not math.isfinite(xn) or abs(xn) >= x_max:
            esc_t = t + step
            return Trajectory(t0, h, direction, 1, np.array(xs), "escaped",
                              esc_t, xn, escape_time=esc_t, escape_x=x)
        x = xn
        xs.append(x)
    return Trajectory(t0, h, direction, 1, np.array(xs), "completed", t_end, x)


def order_check(field_or_fn, eps: float, t0: float, x0: float, t_end: float,
                h0: float = 2.0 ** -7) -> float:
    """Richardson estimate of the convergence order from steps h0, h0/2, h0/4."""
    if t_end == t0:
        raise NumericsError("order_check needs a nonzero window")
    finals = []
    for h in (h0, h0 / 2.0, h0 / 4.0):
        if isinstance(field_or_fn, CubicField):
            traj = rk4_integrate(field_or_fn, eps, t0, x0, t_end, h=h)
        else:
            traj = rk4_generic(field_or_fn, t0, x0, t_end, h)
        if traj.status != "completed":
            raise EscapeError("escape during an order-check run")
        finals.append(traj.final_x)
    e1 = abs(finals[0] - finals[1])
    e2 = abs(finals[1] - finals[2])
    if e2 == 0.0:
        raise NumericsError("differences below precision; widen the window or h0")
    return math.log2(e1 / e2)
