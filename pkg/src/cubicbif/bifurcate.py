"""Bifurcation-value location by bisection on branch-count predicates.

Midpoint evaluations may run with reduced transients while the bracket is wide
(the predicate is robust far from the bifurcation); the final iterations always
use full windows.  Near the bifurcation the two-start agreement check can fail
legitimately (branches separate non-uniformly there): such midpoints are
classified by the separation value and flagged in the report.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .branches import BranchSet, branch_set, constant_branch
from .errors import BracketError, BudgetExceededError, NumericsError
from .field import CubicField, classify_regime
from .lyapunov import LyapBounds, lyap_bounds
from .params import DEFAULT_NUMERICS, REDUCED_NUMERICS, Numerics

__all__ = ["ScanRow", "BifurcationReport", "has_three_branches",
           "bisect_bifurcation", "sweep", "autonomous_bifurcations",
           "transcritical_flip"]

# bracket width below which bisection midpoints switch to full windows
_FULL_WINDOW_WIDTH = 1.0e-6


@dataclass(frozen=True)
class ScanRow:
    """Per-epsilon diagram data (values at t = 0; NaN where absent)."""

    epsilon: float
    count: int
    l0: float
    m0: float
    u0: float
    sep_upper_middle: float
    sep_middle_lower: float
    lyap_lower: LyapBounds | None = None
    lyap_middle: LyapBounds | None = None
    lyap_upper: LyapBounds | None = None
    note: str = ""
    error: str = ""

    @classmethod
    def from_branch_set(cls, bs: BranchSet) -> "ScanRow":
        def at0(b):
            return b.at(0.0) if b is not None else math.nan

        return cls(bs.epsilon, bs.count,
                   at0(bs.lower), at0(bs.middle), at0(bs.upper),
                   bs.sep_upper_middle, bs.sep_middle_lower,
                   bs.lower.lyap if bs.lower else None,
                   bs.middle.lyap if bs.middle else None,
                   bs.upper.lyap if bs.upper else None,
                   note=bs.note)

    @classmethod
    def failed(cls, eps: float, error: str) -> "ScanRow":
        return cls(eps, 0, math.nan, math.nan, math.nan, math.nan, math.nan,
                   error=error)


@dataclass(frozen=True)
class BifurcationReport:
    predicate: str
    bracket: tuple[float, float]
    iterations: int
    witness_lo: object
    witness_hi: object
    target_width: float
    flagged: tuple[float, ...] = ()
    note: str = ""

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.bracket[0] + self.bracket[1])

    @property
    def width(self) -> float:
        return self.bracket[1] - self.bracket[0]


def has_three_branches(field: CubicField, eps: float,
                       num: Numerics = DEFAULT_NUMERICS, *,
                       override: bool = False) -> bool:
    """True when three branches exist with both separations above delta_sep."""
    return branch_set(field, eps, num, override=override).count == 3


def _predicate_sets(field, eps, num, override) -> tuple[bool, BranchSet, bool]:
    """(three?, branch set, flagged?) with near-bifurcation leniency."""
    bs = branch_set(field, eps, num, override=override, strict=False,
                    with_lyap=False)
    return bs.count == 3, bs, bool(bs.note)


def bisect_bifurcation(field: CubicField, eps_a0: float, eps_b0: float,
                       target_width: float | None = None,
                       num: Numerics = DEFAULT_NUMERICS, *,
                       reduced: bool = True,
                       reduced_num: Numerics | None = None,
                       budget: int = 60,
                       override: bool = False) -> BifurcationReport:
    """Standard bisection on the three-branch predicate.

    Each midpoint evaluation is one full branch_set computation.  With
    `reduced` (the default), midpoints use shortened transients until the
    bracket narrows below 1e-6; the final two iterations always use full
    windows.  `reduced=False` is the headline reproduction mode.
    """
    if target_width is None:
        target_width = num.target_width
    if not eps_a0 < eps_b0:
        raise BracketError(f"need eps_a0 < eps_b0, got [{eps_a0}, {eps_b0}]")
    if reduced_num is None:
        reduced_num = REDUCED_NUMERICS.with_(
            h=num.h, t_eval=min(num.t_eval, REDUCED_NUMERICS.t_eval),
            report_dt=num.report_dt, delta_sep=num.delta_sep,
            delta_match=num.delta_match, x_max=num.x_max)
        if reduced_num.t_run <= reduced_num.t_eval:
            reduced_num = reduced_num.with_(t_run=2.0 * reduced_num.t_eval)

    def classify(eps: float, force_full: bool):
        use = num if (force_full or not reduced) else reduced_num
        return _predicate_sets(field, eps, use, override)

    lo, hi = float(eps_a0), float(eps_b0)
    flagged: list[float] = []
    iterations = 0

    def spend():
        nonlocal iterations
        if iterations >= budget:
            raise BudgetExceededError(
                f"bisection budget {budget} exhausted at width {hi - lo:.3e}")
        iterations += 1

    p_lo, set_lo, fl = classify(lo, False)
    if fl:
        flagged.append(lo)
    p_hi, set_hi, fl = classify(hi, False)
    if fl:
        flagged.append(hi)
    if p_lo == p_hi:
        raise BracketError(
            f"three-branch predicate is {p_lo} at both endpoints [{lo}, {hi}]")
    orig_p_lo = p_lo
    anchored_full = not reduced

    while hi - lo > target_width:
        remaining = math.log2((hi - lo) / target_width)
        force_full = (anchored_full or (hi - lo) <= _FULL_WINDOW_WIDTH
                      or remaining <= 2.0)
        if force_full and not anchored_full:
            # the reduced- and full-window predicates flip at slightly
            # different values: re-anchor the bracket under full windows,
            # widening it when the flip moved outside
            anchored_full = True
            spend()
            p_lo, set_lo, _ = classify(lo, True)
            spend()
            p_hi, set_hi, _ = classify(hi, True)
            grow = hi - lo
            while p_lo == p_hi:
                spend()
                if p_lo != orig_p_lo:
                    lo -= grow
                    p_lo, set_lo, _ = classify(lo, True)
                else:
                    hi += grow
                    p_hi, set_hi, _ = classify(hi, True)
                grow *= 2.0
            continue
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break  # bracket at floating-point resolution
        spend()
        p_mid, set_mid, fl = classify(mid, force_full)
        if fl:
            flagged.append(mid)
        if p_mid == p_lo:
            lo, set_lo = mid, set_mid
        else:
            hi, set_hi = mid, set_mid

    return BifurcationReport(
        predicate="three_branches", bracket=(lo, hi), iterations=iterations,
        witness_lo=ScanRow.from_branch_set(set_lo),
        witness_hi=ScanRow.from_branch_set(set_hi),
        target_width=target_width, flagged=tuple(flagged))


def _one_row(field, eps, num, override) -> ScanRow:
    try:
        return ScanRow.from_branch_set(
            branch_set(field, eps, num, override=override, strict=False))
    except Exception as exc:  # per-row failures recorded, sweep continues
        return ScanRow.failed(eps, f"{type(exc).__name__}: {exc}")


def sweep(field: CubicField, eps_grid, num: Numerics = DEFAULT_NUMERICS, *,
          jobs: int = 1, override: bool = False) -> list[ScanRow]:
    """One ScanRow per epsilon, computed independently; rows keep grid order."""
    eps_list = [float(e) for e in eps_grid]
    if not eps_list:
        return []
    if jobs <= 1:
        return [_one_row(field, eps, num, override) for eps in eps_list]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(lambda e: _one_row(field, e, num, override), eps_list))


def autonomous_bifurcations(c: float, b: float, a: float) -> list[float]:
    """Parameter values where the frozen cubic has a double root (constant
    coefficients): real roots of the discriminant's nontrivial factor, plus 0.

    The discriminant is eps * (-4ac^3 + eps*(b^2c^2 - 18abc - 27a^2) + eps^2*4b^3);
    the bracketed factor is linear (b = 0) or quadratic in eps.
    """
    values = {0.0}
    c0 = -4.0 * a * c**3
    c1 = b * b * c * c - 18.0 * a * b * c - 27.0 * a * a
    c2 = 4.0 * b**3
    if c2 == 0.0:
        if c1 != 0.0:
            values.add(-c0 / c1)
    else:
        disc = c1 * c1 - 4.0 * c2 * c0
        if disc >= 0.0:
            # stable quadratic roots
            q = -0.5 * (c1 + math.copysign(math.sqrt(disc), c1 if c1 != 0 else 1.0))
            if q != 0.0:
                values.add(q / c2)
                values.add(c0 / q)
            else:
                values.add(0.0)
    return sorted(values)


def transcritical_flip(field: CubicField, eps_lo: float, eps_hi: float, *,
                       target_width: float = 1.0e-4,
                       T: float = 6.0e4, tau: float = 2.0e4,
                       num: Numerics = DEFAULT_NUMERICS,
                       budget: int = 60) -> BifurcationReport:
    """Bisection on the Lyapunov sign of the constant branch x = s.

    Only defined for the constant-threshold regime (c = s constant, a = -s b);
    the branch is exactly invariant, so its truncated exponent bounds are
    computed directly from a single accumulation run per midpoint.
    """
    regime = classify_regime(field)
    if regime.kind != "Case3_transcritical":
        raise NumericsError("transcritical_flip needs the constant-threshold regime")
    s = field.ratio_s
    branch = constant_branch(s, num)

    def attractive(eps: float) -> tuple[bool, LyapBounds]:
        lb = lyap_bounds(field, eps, branch, T, tau)
        return lb.gamma_hi < 0.0, lb

    lo, hi = float(eps_lo), float(eps_hi)
    p_lo, w_lo = attractive(lo)
    p_hi, w_hi = attractive(hi)
    if p_lo == p_hi:
        raise BracketError("Lyapunov sign does not flip across the bracket")
    iterations = 0
    while hi - lo > target_width:
        if iterations >= budget:
            raise BudgetExceededError(f"flip bisection budget {budget} exhausted")
        mid = 0.5 * (lo + hi)
        p_mid, w_mid = attractive(mid)
        if p_mid == p_lo:
            lo, w_lo = mid, w_mid
        else:
            hi, w_hi = mid, w_mid
        iterations += 1
    return BifurcationReport(
        predicate="constant_branch_lyapunov_sign", bracket=(lo, hi),
        iterations=iterations, witness_lo=w_lo, witness_hi=w_hi,
        target_width=target_width)
