"""Locating the attractive branches u, l and the repulsive branch m.

Attractive branches come from long forward transients started at the
bracketing constants (pullback attraction used operationally); the repulsive
branch from a backward transient seeded between the attractive ends.  Two
distinct starts per branch must agree within delta_match, otherwise the run is
declared not converged.  Branch counting merges candidates whose min-over-
window gap falls below delta_sep; near a bifurcation the count is therefore
threshold-dependent, which is accepted and surfaced in reports.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, EscapeError, HypothesisError, NumericsError
from .field import CubicField, bracket_constants, classify_regime
from .integrate import Trajectory, drive_states
from .lyapunov import LyapBounds, bounds_from_cells
from .params import DEFAULT_NUMERICS, Numerics

__all__ = ["Branch", "BranchSet", "locate_attractive", "locate_repulsive",
           "branch_set", "first_crossing", "branch_residual"]


@dataclass(frozen=True)
class Branch:
    """A located bounded-solution candidate on the report grid."""

    t_left: float
    dt: float
    samples: np.ndarray
    stability: str            # attractive | repulsive | undetermined
    source: str               # forward-upper | forward-lower | backward-mid | constant
    left_value: float
    end_time: float
    end_value: float
    numerics: Numerics
    window_cells: np.ndarray | None = None
    const_value: float | None = None
    seed_time: float | None = None
    seed_value: float | None = None
    aux_ends: tuple[float, float] | None = None
    lyap: LyapBounds | None = None

    def times(self) -> np.ndarray:
        return self.t_left + self.dt * np.arange(self.samples.size)

    def at(self, t: float) -> float:
        """Sample value at a report-grid time."""
        k = round((t - self.t_left) / self.dt)
        if not 0 <= k < self.samples.size or abs(self.t_left + k * self.dt - t) > 1e-9:
            raise NumericsError(f"t={t} is not on the branch report grid")
        return float(self.samples[k])


@dataclass(frozen=True)
class BranchSet:
    epsilon: float
    lower: Branch | None
    middle: Branch | None
    upper: Branch | None
    count: int
    sep_upper_middle: float
    sep_middle_lower: float
    note: str = ""

    def branches(self) -> list[Branch]:
        return [b for b in (self.lower, self.middle, self.upper) if b is not None]


def _window_grid(num: Numerics) -> tuple[float, int, int]:
    """(t_left, n_samples, n_cells) of the report window [-t_eval, t_eval]."""
    n_cells = round(2.0 * num.t_eval / num.report_dt)
    if abs(n_cells * num.report_dt - 2.0 * num.t_eval) > 1e-9:
        raise NumericsError("t_eval must be a multiple of report_dt")
    return -num.t_eval, n_cells + 1, n_cells


def _window_lyap(cells: np.ndarray | None, num: Numerics, t_left: float) -> LyapBounds | None:
    if cells is None or cells.size == 0:
        return None
    T = cells.size * num.report_dt
    tau = max(num.report_dt, T / 10.0)
    return bounds_from_cells(cells, num.report_dt, T, tau, origin=t_left)


def _attractive_stability(lyap: LyapBounds | None) -> str:
    if lyap is not None and lyap.sign == "negative":
        return "attractive"
    return "undetermined"


def _repulsive_stability(lyap: LyapBounds | None) -> str:
    if lyap is not None and lyap.sign == "positive":
        return "repulsive"
    return "undetermined"


def _require_hypotheses(field: CubicField) -> None:
    regime = classify_regime(field)
    failed = tuple(name for name in ("c_pos", "a_neg") if not regime.flags[name])
    if failed:
        raise HypothesisError(
            f"branch location requires c > 0 and a < 0; failed: {', '.join(failed)}",
            failed_flags=failed)


def _forward_pass(field: CubicField, eps: float, starts, num: Numerics,
                  with_cells: bool = True):
    """Forward drive over [-t_run, +t_run] recording the report window."""
    t_left, n_rec, n_cells = _window_grid(num)
    out = drive_states(field, eps, -num.t_run, starts, num.t_run, h=num.h,
                       record=(t_left, num.report_dt, n_rec),
                       accumulate=(t_left, num.report_dt, n_cells) if with_cells else None,
                       x_max=num.x_max)
    if np.any(out.status == 1):
        raise EscapeError("forward run escaped; coercivity violated (internal error)")
    return out


def _pair_agreement(sa: np.ndarray, sb: np.ndarray) -> float:
    return float(np.max(np.abs(sa - sb)))


def _attractive_branch(field, eps, out, state: int, source: str, num: Numerics) -> Branch:
    t_left, _, _ = _window_grid(num)
    samples = out.samples[state].copy()
    cells = out.cells[state].copy() if out.cells.size else None
    lyap = _window_lyap(cells, num, t_left)
    return Branch(
        t_left=t_left, dt=num.report_dt, samples=samples,
        stability=_attractive_stability(lyap), source=source,
        left_value=float(samples[0]), end_time=num.t_run,
        end_value=float(out.finals[state]), numerics=num,
        window_cells=cells, lyap=lyap)


def constant_branch(value: float, num: Numerics, cells: np.ndarray | None = None,
                    stability: str | None = None) -> Branch:
    """Branch for an exactly invariant constant solution (x=0 at eps=0; x=s in
    the constant-threshold case)."""
    t_left, n_rec, n_cells = _window_grid(num)
    if cells is None:
        cells_arr = None
        lyap = None
    else:
        cells_arr = cells
        lyap = _window_lyap(cells_arr, num, t_left)
    return Branch(
        t_left=t_left, dt=num.report_dt,
        samples=np.full(n_rec, float(value)),
        stability=stability if stability is not None else "undetermined",
        source="constant", left_value=float(value), end_time=num.t_run,
        end_value=float(value), numerics=num, window_cells=cells_arr,
        const_value=float(value), lyap=lyap)


def locate_attractive(field: CubicField, eps: float, side: str,
                      num: Numerics = DEFAULT_NUMERICS, *,
                      override: bool = False) -> Branch:
    """Locate the attractive branch reached forward from above (upper) or below
    (lower); two distinct starts must agree within delta_match on the window."""
    if side not in ("upper", "lower"):
        raise ValueError("side must be 'upper' or 'lower'")
    if not override:
        _require_hypotheses(field)
    r1, r2 = bracket_constants(field, eps)
    starts = [r2, r2 + 1.0] if side == "upper" else [r1, r1 - 1.0]
    out = _forward_pass(field, eps, starts, num)
    gap = _pair_agreement(out.samples[0], out.samples[1])
    if gap > num.delta_match:
        raise ConvergenceError(
            f"{side} forward starts disagree by {gap:.3e} (> delta_match)",
            disagreement=gap)
    return _attractive_branch(field, eps, out, 0, f"forward-{side}", num)


def _backward_middle(field: CubicField, eps: float, u_end: float, l_end: float,
                     num: Numerics, with_cells: bool = True) -> tuple[Branch | None, float]:
    """Backward run seeded between the attractive ends; (branch, disagreement).

    Returns (None, 0) when the primary backward run escapes: no repeller lies
    between the branches in the resolvable sense.
    """
    t_left, n_rec, n_cells = _window_grid(num)
    seed = 0.5 * (u_end + l_end)
    seed2 = 0.25 * u_end + 0.75 * l_end
    out = drive_states(field, eps, num.t_run, [seed, seed2], t_left, h=num.h,
                       record=(num.t_eval, num.report_dt, n_rec),
                       accumulate=(num.t_eval, num.report_dt, n_cells) if with_cells else None,
                       x_max=num.x_max)
    if out.status[0] != 0:
        return None, 0.0
    samples = out.samples[0][::-1].copy()
    cells = out.cells[0][::-1].copy() if out.cells.size else None
    disagreement = (_pair_agreement(out.samples[0], out.samples[1])
                    if out.status[1] == 0 else math.inf)
    lyap = _window_lyap(cells, num, t_left)
    branch = Branch(
        t_left=t_left, dt=num.report_dt, samples=samples,
        stability=_repulsive_stability(lyap), source="backward-mid",
        left_value=float(samples[0]), end_time=t_left, end_value=float(samples[0]),
        numerics=num, window_cells=cells, seed_time=num.t_run, seed_value=seed,
        aux_ends=(u_end, l_end), lyap=lyap)
    return branch, disagreement


def locate_repulsive(field: CubicField, eps: float,
                     between: tuple[Branch, Branch],
                     num: Numerics = DEFAULT_NUMERICS) -> Branch | None:
    """Backward-locate the repulsive branch between two attractive branches."""
    upper, lower = between
    if upper.samples.mean() < lower.samples.mean():
        upper, lower = lower, upper
    sep = float(np.min(upper.samples - lower.samples))
    if sep <= num.delta_sep:
        raise NumericsError("attractive branches are not separated; no middle to locate")
    branch, disagreement = _backward_middle(field, eps, upper.end_value,
                                            lower.end_value, num)
    if branch is not None and disagreement > num.delta_match:
        raise ConvergenceError(
            f"backward starts disagree by {disagreement:.3e} (> delta_match)",
            disagreement=disagreement,
            separation=float(min(np.min(upper.samples - branch.samples),
                                 np.min(branch.samples - lower.samples))))
    return branch


def branch_set(field: CubicField, eps: float, num: Numerics = DEFAULT_NUMERICS, *,
               override: bool = False, strict: bool = True,
               with_lyap: bool = True) -> BranchSet:
    """Locate all branches at one parameter value and count the separated ones.

    strict=False downgrades two-start disagreement from an error to a note and
    classifies by separations (used by bisection midpoints near a bifurcation).
    with_lyap=False skips the exponent accumulation (stability comes out
    undetermined); bisection midpoints use it since only the count matters.
    """
    if not override:
        _require_hypotheses(field)
    note = ""
    if eps == 0.0:
        # x = 0 solves the eps = 0 equation exactly and carries exponent 0
        # (f_x(t, 0) = scale * eps * b): nonhyperbolic lower branch.
        _, _, n_cells = _window_grid(num)
        upper = locate_attractive(field, eps, "upper", num, override=True)
        lower = constant_branch(0.0, num, cells=np.zeros(n_cells))
        sep = float(np.min(upper.samples - lower.samples))
        return BranchSet(eps, lower, None, upper, 2, math.nan, sep,
                         note="eps=0: lower branch pinned to the exact solution 0")

    r1, r2 = bracket_constants(field, eps)
    out = _forward_pass(field, eps, [r2, r2 + 1.0, r1, r1 - 1.0], num,
                        with_cells=with_lyap)
    for state, side in ((0, "upper"), (2, "lower")):
        gap = _pair_agreement(out.samples[state], out.samples[state + 1])
        if gap > num.delta_match:
            sep_ul = float(np.min(out.samples[0] - out.samples[2]))
            msg = (f"{side} forward starts disagree by {gap:.3e}")
            if strict:
                raise ConvergenceError(msg, disagreement=gap, separation=sep_ul)
            note = msg
    upper = _attractive_branch(field, eps, out, 0, "forward-upper", num)
    lower = _attractive_branch(field, eps, out, 2, "forward-lower", num)

    sep_ul = float(np.min(upper.samples - lower.samples))
    if sep_ul <= num.delta_sep:
        return BranchSet(eps, None, None, upper, 1, math.nan, math.nan,
                         note=note or "forward runs coincide on one branch")

    middle, disagreement = _backward_middle(field, eps, upper.end_value,
                                            lower.end_value, num,
                                            with_cells=with_lyap)
    if middle is None:
        return BranchSet(eps, lower, None, upper, 2, math.nan, sep_ul,
                         note=note or "backward run escaped: no resolvable middle branch")
    sep_um = float(np.min(upper.samples - middle.samples))
    sep_ml = float(np.min(middle.samples - lower.samples))
    if disagreement > num.delta_match:
        msg = f"backward starts disagree by {disagreement:.3e}"
        if strict:
            raise ConvergenceError(msg, disagreement=disagreement,
                                   separation=min(sep_um, sep_ml))
        note = note or msg
    if sep_um <= num.delta_sep and sep_ml <= num.delta_sep:
        return BranchSet(eps, lower, None, upper, 2, sep_um, sep_ml,
                         note=note or "middle candidate within delta_sep of both branches")
    if sep_um <= num.delta_sep:
        return BranchSet(eps, lower, None, upper, 2, sep_um, sep_ml,
                         note=note or "middle collided with upper (within delta_sep)")
    if sep_ml <= num.delta_sep:
        return BranchSet(eps, lower, None, upper, 2, sep_um, sep_ml,
                         note=note or "middle collided with lower (within delta_sep)")
    return BranchSet(eps, lower, middle, upper, 3, sep_um, sep_ml, note=note)


def first_crossing(traj: Trajectory, level: float) -> float | None:
    """Earliest time the trajectory crosses `level`, linearly interpolated
    between adjacent samples; None if it never does."""
    xs = traj.samples
    if xs.size == 0:
        return None
    ts = traj.times()
    if xs[0] == level:
        return float(ts[0])
    d = xs - level
    for i in range(xs.size - 1):
        if d[i] == 0.0:
            return float(ts[i])
        if d[i] * d[i + 1] <= 0.0:
            frac = d[i] / (d[i] - d[i + 1])
            return float(ts[i] + frac * (ts[i + 1] - ts[i]))
    if d[-1] == 0.0:
        return float(ts[-1])
    return None


def branch_residual(field: CubicField, eps: float, branch: Branch,
                    max_cells: int = 64) -> float:
    """Max over sampled report cells of |one-cell reintegration - next sample|.

    Verifies the stored samples satisfy the ODE at full resolution.
    """
    n = branch.samples.size - 1
    if n <= 0 or branch.source == "constant":
        return 0.0
    idx = np.linspace(0, n - 1, min(max_cells, n)).astype(int)
    worst = 0.0
    num = branch.numerics
    for k in np.unique(idx):
        t0 = branch.t_left + k * branch.dt
        out = drive_states(field, eps, t0, [branch.samples[k]], t0 + branch.dt,
                           h=num.h, x_max=num.x_max)
        worst = max(worst, abs(float(out.finals[0]) - float(branch.samples[k + 1])))
    return worst
