"""Truncated Lyapunov exponents along located branches.

The exponent of a branch is the long-time average of the field's x-derivative
along it; finitely truncated averages over a tail grid [tau, T] give certified
lower/upper approximations whose min/max bracket the limit.  Time origin is the
branch's left end (the limit is origin-independent, the truncation is not; the
origin is recorded).  Quadrature is composite Simpson at the integration step,
accumulated while the branch is regenerated at full resolution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import EscapeError, NumericsError
from .integrate import drive_states
from .params import Numerics

__all__ = ["LyapBounds", "bounds_from_cells", "truncated_exponent", "lyap_bounds"]


@dataclass(frozen=True)
class LyapBounds:
    """min/max of truncated exponents over the grid t in [tau, T]."""

    gamma_lo: float
    gamma_hi: float
    T: float
    tau: float
    origin: float       # absolute time of the truncation origin
    grid_dt: float      # grid step used for the min/max

    @property
    def sign(self) -> str:
        if self.gamma_hi < 0.0:
            return "negative"
        if self.gamma_lo > 0.0:
            return "positive"
        return "straddles_zero"

    @property
    def width(self) -> float:
        return self.gamma_hi - self.gamma_lo


def bounds_from_cells(cells: np.ndarray, dt: float, T: float, tau: float,
                      origin: float) -> LyapBounds:
    """Bounds from per-cell integrals of f_x (ascending time, cell width dt)."""
    if not 0.0 < tau < T:
        raise NumericsError("need 0 < tau < T")
    k_hi = round(T / dt)
    k_lo = max(1, math.ceil(tau / dt - 1e-9))
    if k_hi > cells.size:
        raise NumericsError(f"insufficient coverage: T={T} needs {k_hi} cells, have {cells.size}")
    cum = np.cumsum(cells[:k_hi])
    ts = dt * np.arange(1, k_hi + 1)
    gammas = cum[k_lo - 1:] / ts[k_lo - 1:]
    return LyapBounds(float(gammas.min()), float(gammas.max()), T, tau, origin, dt)


def _regenerate_cells(field, eps: float, branch, span: float) -> np.ndarray:
    """Per-cell f_x integrals along the branch over [t_left, t_left + span]."""
    num: Numerics = branch.numerics
    dt = branch.dt
    n_cells = round(span / dt)
    t_left = branch.t_left
    if branch.source in ("forward-upper", "forward-lower", "constant"):
        x0 = branch.const_value if branch.source == "constant" else branch.left_value
        out = drive_states(field, eps, t_left, [x0], t_left + n_cells * dt,
                           h=num.h, accumulate=(t_left, dt, n_cells), x_max=num.x_max)
        if out.status[0] != 0:
            raise EscapeError("branch regeneration escaped")
        return out.cells[0]
    if branch.source == "backward-mid":
        if branch.aux_ends is None or branch.seed_time is None:
            raise NumericsError("backward branch lacks regeneration seeds")
        t_right = t_left + n_cells * dt
        if t_right <= branch.seed_time - (num.t_run - num.t_eval):
            seed_t, seed_x = branch.seed_time, branch.seed_value
        else:
            # extend the attractive pair, then seed a fresh backward transient
            seed_t = t_right + (num.t_run - num.t_eval)
            u_end, l_end = branch.aux_ends
            ext = drive_states(field, eps, branch.seed_time, [u_end, l_end], seed_t,
                               h=num.h, x_max=num.x_max)
            if np.any(ext.status != 0):
                raise EscapeError("attractive extension escaped")
            seed_x = 0.5 * (ext.finals[0] + ext.finals[1])
        out = drive_states(field, eps, seed_t, [seed_x], t_left,
                           h=num.h, accumulate=(t_right, dt, n_cells), x_max=num.x_max)
        if out.status[0] != 0:
            raise EscapeError("backward branch regeneration escaped")
        return out.cells[0][::-1]
    raise NumericsError(f"unknown branch source {branch.source!r}")


def _cells_for(field, eps: float, branch, T: float) -> tuple[np.ndarray, float]:
    dt = branch.dt
    span = round(T / dt) * dt
    if abs(span - T) > 1e-9 * max(1.0, T):
        raise NumericsError("T must be a multiple of the branch report step")
    window_span = (branch.samples.size - 1) * dt
    if branch.window_cells is not None and span <= window_span + 1e-9:
        return branch.window_cells, dt
    return _regenerate_cells(field, eps, branch, span), dt


def truncated_exponent(field, eps: float, branch, t: float) -> float:
    """(1/t) * integral_0^t of f_x along the branch, origin at its left end."""
    if t <= 0.0:
        raise NumericsError("truncated exponent needs t > 0")
    cells, dt = _cells_for(field, eps, branch, t)
    k = max(1, round(t / dt))
    return float(np.sum(cells[:k]) / (k * dt))


def lyap_bounds(field, eps: float, branch, T: float, tau: float) -> LyapBounds:
    """gamma_lo/gamma_hi = min/max of truncated exponents on the report grid in [tau, T]."""
    cells, dt = _cells_for(field, eps, branch, T)
    return bounds_from_cells(cells, dt, T, tau, origin=branch.t_left)
