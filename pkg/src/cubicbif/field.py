"""The parametric cubic field scale(t)*(-x^3 + c(t)x^2 + eps*(b(t)x + a(t))).

Frozen-time root structure (via the cubic discriminant), regime classification
against certified coefficient bounds, and analytic bracketing constants that
confine every bounded solution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .coeffs import Coefficient, TrigPoly, TrigRatio, as_coefficient
from .errors import EscapeError, NumericsError

__all__ = [
    "CubicField",
    "RegimeClass",
    "eval_field",
    "eval_dfdx",
    "discriminant",
    "real_roots",
    "classify_regime",
    "bracket_constants",
    "x_plus",
]

_ONE = TrigPoly.constant(1.0)

# |discriminant| below this reports a multiple root instead of picking a side.
DISCRIMINANT_TIE = 1e-12


@dataclass(frozen=True)
class CubicField:
    """Immutable coefficient bundle; prefer `with_threshold` when a = -s*b."""

    c: Coefficient
    b: Coefficient
    a: Coefficient
    scale: Coefficient = _ONE
    ratio_s: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "c", as_coefficient(self.c))
        object.__setattr__(self, "b", as_coefficient(self.b))
        object.__setattr__(self, "a", as_coefficient(self.a))
        object.__setattr__(self, "scale", as_coefficient(self.scale))
        if self.scale.lower_bound() <= 0.0:
            raise NumericsError("scale must be positively bounded below")

    @classmethod
    def with_threshold(cls, c, b, s: float, scale=_ONE) -> "CubicField":
        """Build a field with a = -s*b represented structurally."""
        b = as_coefficient(b)
        if isinstance(b, TrigRatio):
            a = TrigRatio(b.num * (-float(s)), b.den)
        else:
            a = b * (-float(s))
        return cls(c, b, a, scale, ratio_s=float(s))

    def frequencies(self) -> tuple[float, ...]:
        seen: list[float] = []
        for coeff in (self.c, self.b, self.a, self.scale):
            for f in coeff.frequencies():
                if f not in seen:
                    seen.append(f)
        return tuple(sorted(seen))


@dataclass(frozen=True)
class RegimeClass:
    """Which regime hypotheses the coefficient bounds certify."""

    kind: str  # Case1_below | Case2_above | Case3_transcritical | Unclassified
    flags: dict
    c_minus: float
    c_plus: float
    s_minus: float
    s_plus: float
    frequencies: tuple[float, ...] = ()


def eval_field(f: CubicField, eps: float, t, x):
    """scale(t) * (-x^3 + c(t) x^2 + eps*(b(t) x + a(t)))."""
    t = np.asarray(t, dtype=float)
    x = np.asarray(x, dtype=float)
    out = f.scale(t) * (-x**3 + f.c(t) * x**2 + eps * (f.b(t) * x + f.a(t)))
    return float(out) if np.ndim(out) == 0 else out


def eval_dfdx(f: CubicField, eps: float, t, x):
    """d/dx of the field: scale(t) * (-3x^2 + 2 c(t) x + eps b(t))."""
    t = np.asarray(t, dtype=float)
    x = np.asarray(x, dtype=float)
    out = f.scale(t) * (-3.0 * x**2 + 2.0 * f.c(t) * x + eps * f.b(t))
    return float(out) if np.ndim(out) == 0 else out


def discriminant(f: CubicField, eps: float, t) -> float:
    """Cubic discriminant at frozen t; scale excluded (roots are scale-invariant).

    Positive: three real roots.  Negative: one.  Zero: a multiple root.
    """
    t = np.asarray(t, dtype=float)
    a, b, c = f.a(t), f.b(t), f.c(t)
    out = eps * (-4.0 * a * c**3 + eps * b**2 * c**2 - 18.0 * eps * a * b * c
                 - 27.0 * eps * a**2 + 4.0 * eps**2 * b**3)
    return float(out) if np.ndim(out) == 0 else out


def _newton_polish(x: float, c: float, eb: float, ea: float, steps: int = 2) -> float:
    for _ in range(steps):
        fx = -x**3 + c * x**2 + eb * x + ea
        dfx = -3.0 * x**2 + 2.0 * c * x + eb
        if abs(dfx) < 1e-14:
            break
        x -= fx / dfx
    return x


def real_roots(f: CubicField, eps: float, t: float) -> list[float]:
    """Real roots (ascending, with multiplicity) of x -> -x^3+c x^2+eps(bx+a) at frozen t.

    Trigonometric/Cardano formulas plus one Newton polish per simple root.
    """
    c = float(f.c(t))
    eb = eps * float(f.b(t))
    ea = eps * float(f.a(t))
    # monic form x^3 + B x^2 + C x + D after negation
    B, C, D = -c, -eb, -ea
    p = C - B * B / 3.0
    q = D - B * C / 3.0 + 2.0 * B**3 / 27.0
    shift = -B / 3.0
    delta = discriminant(f, eps, t)
    # the depressed-cubic discriminant can disagree with delta in sign inside
    # the rounding band around a multiple root; treat both as the tie zone
    disc_dep = q * q / 4.0 + p**3 / 27.0
    if abs(delta) <= DISCRIMINANT_TIE or (delta > 0.0) == (disc_dep > 0.0):
        if abs(p) < 1e-9 and abs(q) < 1e-9:
            return [shift, shift, shift]
        # double root y = -3q/(2p), simple root y = 3q/p
        y_double = -3.0 * q / (2.0 * p)
        y_simple = 3.0 * q / p
        return sorted([y_simple + shift, y_double + shift, y_double + shift])
    if delta > 0.0:
        # three distinct real roots (p < 0 here)
        m = 2.0 * math.sqrt(-p / 3.0)
        arg = 3.0 * q / (p * m)
        arg = min(1.0, max(-1.0, arg))
        theta = math.acos(arg) / 3.0
        ys = [m * math.cos(theta - 2.0 * math.pi * k / 3.0) for k in range(3)]
        xs = [_newton_polish(y + shift, c, eb, ea) for y in ys]
        return sorted(xs)
    # one real root: Cardano with a stable cube-root form
    if p == 0.0:
        y = math.copysign(abs(q) ** (1.0 / 3.0), -q)
    else:
        root = math.sqrt(disc_dep)
        u = -q / 2.0 + root
        v = -q / 2.0 - root
        y = math.copysign(abs(u) ** (1.0 / 3.0), u) + math.copysign(abs(v) ** (1.0 / 3.0), v)
    return [_newton_polish(y + shift, c, eb, ea)]


def _threshold_bounds(f: CubicField) -> tuple[float, float]:
    """Bounds of -a/b; exact when a = -s*b structurally, conservative otherwise."""
    if f.ratio_s is not None:
        return f.ratio_s, f.ratio_s
    b_lo, _ = f.b.bounds()
    a_lo, a_hi = f.a.bounds()
    if b_lo <= 0.0:
        return float("nan"), float("nan")
    b_hi = f.b.upper_bound()
    # -a in [-a_hi, -a_lo], positive when a < 0
    return -a_hi / b_hi, -a_lo / b_lo


def classify_regime(f: CubicField) -> RegimeClass:
    """Decide Case1/Case2/Case3 from certified bounds; equality is Unclassified."""
    c_lo, c_hi = f.c.bounds()
    a_lo, a_hi = f.a.bounds()
    b_lo, b_hi = f.b.bounds()
    s_lo, s_hi = _threshold_bounds(f)
    flags = {
        "c_pos": c_lo > 0.0,
        "a_neg": a_hi < 0.0,
        "b_nonneg": b_lo >= 0.0,
        "b_pos": b_lo > 0.0,
        "c_plus_lt_3c_minus": c_hi < 3.0 * c_lo,
        "c_plus_lt_3s_minus": not math.isnan(s_lo) and c_hi < 3.0 * s_lo,
        "a_is_const_multiple_of_b": f.ratio_s is not None,
    }
    kind = "Unclassified"
    if flags["c_pos"] and flags["a_neg"]:
        if (flags["a_is_const_multiple_of_b"] and flags["b_pos"]
                and f.c.is_constant() and not isinstance(f.c, TrigRatio)
                and f.c.const == f.ratio_s):
            kind = "Case3_transcritical"
        elif flags["b_nonneg"] and not math.isnan(s_lo) and c_hi < s_lo:
            kind = "Case1_below"
        elif flags["b_pos"] and not math.isnan(s_hi) and c_lo > s_hi:
            kind = "Case2_above"
    return RegimeClass(kind, flags, c_lo, c_hi, s_lo, s_hi, f.frequencies())


def _field_range_at(f: CubicField, eps: float, x: float) -> tuple[float, float]:
    """Certified range over t of -x^3 + c(t)x^2 + eps*(b(t)x + a(t)); scale > 0 omitted."""
    c_lo, c_hi = f.c.bounds()
    b_lo, b_hi = f.b.bounds()
    a_lo, a_hi = f.a.bounds()
    base = -x**3
    lo = base + x * x * c_lo
    hi = base + x * x * c_hi
    ex = eps * x
    lo += min(ex * b_lo, ex * b_hi) + min(eps * a_lo, eps * a_hi)
    hi += max(ex * b_lo, ex * b_hi) + max(eps * a_lo, eps * a_hi)
    return lo, hi


_ROOT_GRID = 33  # frozen-time root samples seeding the bracket refinement


def bracket_constants(f: CubicField, eps: float) -> tuple[float, float]:
    """(r1, r2) with p_eps(t, r1) > 0 and p_eps(t, r2) < 0 for all t, certified.

    Every bounded solution lies in (r1, r2).  Search expands geometrically from
    bound-derived candidates (exceeding |r| = 1e6 is an internal error: it
    cannot happen for the coercive cubic with bounded coefficients), then
    bisects back toward the certified sign-change, staying outside the frozen-
    time root range so the result still encloses every bounded solution.
    """
    c_hi = f.c.upper_bound()
    _, s_hi = _threshold_bounds(f)
    b_hi = f.b.upper_bound()
    a_lo = f.a.lower_bound()
    r2 = max(c_hi, s_hi if not math.isnan(s_hi) else 0.0, 1.0) + 1.0
    while _field_range_at(f, eps, r2)[1] >= 0.0:
        r2 *= 2.0
        if r2 > 1e6:
            raise EscapeError("upper bracket search exceeded 1e6")
    r1 = -max(1.0, math.sqrt(abs(eps) * (abs(b_hi) + abs(a_lo)))) - 1.0
    while _field_range_at(f, eps, r1)[0] <= 0.0:
        r1 *= 2.0
        if r1 < -1e6:
            raise EscapeError("lower bracket search exceeded 1e6")

    # frozen-time roots bound the region every bounded solution lives in;
    # the certified-sign predicates are monotone outside it
    freqs = f.frequencies()
    span = 2.0 * math.pi * _ROOT_GRID / min(freqs) if freqs else 1.0
    roots = [x for k in range(_ROOT_GRID)
             for x in real_roots(f, eps, span * k / _ROOT_GRID)]
    lo = max(roots)
    for _ in range(60):
        mid = 0.5 * (lo + r2)
        if _field_range_at(f, eps, mid)[1] < 0.0:
            r2 = mid
        else:
            lo = mid
    r2 += 0.05 * (1.0 + abs(r2))
    hi = min(roots)
    for _ in range(60):
        mid = 0.5 * (r1 + hi)
        if _field_range_at(f, eps, mid)[0] > 0.0:
            r1 = mid
        else:
            hi = mid
    r1 -= 0.05 * (1.0 + abs(r1))
    return r1, r2


def x_plus(f: CubicField, eps: float) -> float:
    """Local minimum location of the minorant cubic: (c_- + sqrt(c_-^2 + 3 eps b_-))/3.

    For large eps > 0 it is a strict global lower solution separating the middle
    branch from the upper one.
    """
    if eps < 0.0:
        raise NumericsError("x_plus requires eps >= 0")
    b_lo = f.b.lower_bound()
    if b_lo < 0.0:
        raise NumericsError("x_plus requires b >= 0")
    c_lo = f.c.lower_bound()
    return (c_lo + math.sqrt(c_lo * c_lo + 3.0 * eps * b_lo)) / 3.0
