"""Quasiperiodic scalar coefficients: trigonometric polynomials and their ratios.

A coefficient is a constant plus finitely many sinusoidal harmonics.  Means are
exact (the constant term), and lower/upper bounds are certified conservative
sums of amplitude magnitudes, suitable for feeding bracketing constants and
hypothesis checks.  Products of trigonometric polynomials stay in the class
(product-to-sum), which is what lets the population model's composite
coefficients keep exact bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = ["Harmonic", "TrigPoly", "TrigRatio", "as_coefficient"]

_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class Harmonic:
    """One sinusoidal term amplitude*kind(frequency*t + phase), kind in {sin, cos}."""

    amplitude: float
    frequency: float
    phase: float = 0.0
    kind: str = "cos"

    def __post_init__(self):
        if self.frequency <= 0.0:
            raise ValueError(f"harmonic frequency must be > 0, got {self.frequency}")
        if self.kind not in ("sin", "cos"):
            raise ValueError(f"harmonic kind must be 'sin' or 'cos', got {self.kind!r}")

    def __call__(self, t):
        theta = self.frequency * np.asarray(t, dtype=float) + self.phase
        return self.amplitude * (np.cos(theta) if self.kind == "cos" else np.sin(theta))


@dataclass(frozen=True)
class TrigPoly:
    """constant + sum of harmonics; immutable, safe for concurrent reads."""

    const: float = 0.0
    harmonics: tuple[Harmonic, ...] = ()

    def __call__(self, t):
        out = np.full_like(np.asarray(t, dtype=float), self.const)
        for harm in self.harmonics:
            out = out + harm(t)
        if out.ndim == 0:
            return float(out)
        return out

    def mean(self) -> float:
        """Exact time mean: the constant term (each harmonic averages to zero)."""
        return self.const

    def amplitude_sum(self) -> float:
        return sum(abs(h.amplitude) for h in self.harmonics)

    def lower_bound(self) -> float:
        """Certified inf bound: const - sum |amplitude|.

        Attained (in the limit) when frequencies are rationally independent;
        conservative otherwise.
        """
        return self.const - self.amplitude_sum()

    def upper_bound(self) -> float:
        return self.const + self.amplitude_sum()

    def bounds(self) -> tuple[float, float]:
        return self.lower_bound(), self.upper_bound()

    def grid_bounds(self, step: float = 1e-3, span: float | None = None) -> tuple[float, float]:
        """Grid-refined (min, max) over one quasi-period estimate.

        Reporting only: never used where a guarantee is needed.
        """
        if not self.harmonics:
            return self.const, self.const
        if span is None:
            span = 64.0 * _TWO_PI / min(h.frequency for h in self.harmonics)
        ts = np.arange(0.0, span, step)
        vals = self(ts)
        return float(vals.min()), float(vals.max())

    def is_constant(self) -> bool:
        return not self.harmonics

    def frequencies(self) -> tuple[float, ...]:
        return tuple(h.frequency for h in self.harmonics)

    # -- arithmetic (exact within the class) --------------------------------

    def __add__(self, other):
        if isinstance(other, TrigPoly):
            return TrigPoly(self.const + other.const, self.harmonics + other.harmonics)
        return TrigPoly(self.const + float(other), self.harmonics)

    __radd__ = __add__

    def __neg__(self):
        return self * -1.0

    def __sub__(self, other):
        return self + (-other if isinstance(other, TrigPoly) else -float(other))

    def __mul__(self, other):
        if isinstance(other, TrigPoly):
            return _product(self, other)
        k = float(other)
        return TrigPoly(
            self.const * k,
            tuple(Harmonic(h.amplitude * k, h.frequency, h.phase, h.kind) for h in self.harmonics),
        )

    __rmul__ = __mul__

    # -- construction / config schema ----------------------------------------

    @classmethod
    def constant(cls, value: float) -> "TrigPoly":
        return cls(float(value))

    @classmethod
    def from_dict(cls, d: dict) -> "TrigPoly":
        harms = tuple(
            Harmonic(float(h["amp"]), float(h["freq"]), float(h.get("phase", 0.0)),
                     str(h.get("kind", "cos")))
            for h in d.get("harmonics", ())
        )
        return cls(float(d.get("constant", 0.0)), harms)

    def to_dict(self) -> dict:
        return {
            "constant": float(self.const),
            "harmonics": [
                {"amp": float(h.amplitude), "freq": float(h.frequency),
                 "phase": float(h.phase), "kind": h.kind}
                for h in self.harmonics
            ],
        }


def _sum_to_harmonic(amp: float, freq: float, phase: float, kind: str):
    """Normalize a term amp*kind(freq t + phase) to positive frequency.

    Returns either a Harmonic or a float (constant contribution) when freq == 0.
    """
    if freq == 0.0:
        return amp * (math.cos(phase) if kind == "cos" else math.sin(phase))
    if freq < 0.0:
        # cos(-x) = cos(x); sin(-x) = -sin(x)
        if kind == "cos":
            return Harmonic(amp, -freq, -phase, "cos")
        return Harmonic(-amp, -freq, -phase, "sin")
    return Harmonic(amp, freq, phase, kind)


def _product(p: TrigPoly, q: TrigPoly) -> TrigPoly:
    """Exact product via product-to-sum identities."""
    const = p.const * q.const
    harms: list[Harmonic] = []
    for h in p.harmonics:
        harms.append(Harmonic(h.amplitude * q.const, h.frequency, h.phase, h.kind))
    for h in q.harmonics:
        harms.append(Harmonic(h.amplitude * p.const, h.frequency, h.phase, h.kind))
    for ha in p.harmonics:
        for hb in q.harmonics:
            amp = 0.5 * ha.amplitude * hb.amplitude
            fs, fd = ha.frequency + hb.frequency, ha.frequency - hb.frequency
            ps, pd = ha.phase + hb.phase, ha.phase - hb.phase
            ka, kb = ha.kind, hb.kind
            if ka == "sin" and kb == "sin":
                # sin A sin B = (cos(A-B) - cos(A+B))/2
                terms = ((amp, fd, pd, "cos"), (-amp, fs, ps, "cos"))
            elif ka == "cos" and kb == "cos":
                # cos A cos B = (cos(A-B) + cos(A+B))/2
                terms = ((amp, fd, pd, "cos"), (amp, fs, ps, "cos"))
            elif ka == "sin" and kb == "cos":
                # sin A cos B = (sin(A+B) + sin(A-B))/2
                terms = ((amp, fs, ps, "sin"), (amp, fd, pd, "sin"))
            else:
                # cos A sin B = (sin(A+B) - sin(A-B))/2
                terms = ((amp, fs, ps, "sin"), (-amp, fd, pd, "sin"))
            for t_amp, t_freq, t_phase, t_kind in terms:
                item = _sum_to_harmonic(t_amp, t_freq, t_phase, t_kind)
                if isinstance(item, Harmonic):
                    harms.append(item)
                else:
                    const += item
    return TrigPoly(const, tuple(harms))


@dataclass(frozen=True)
class TrigRatio:
    """Pointwise ratio num(t)/den(t) of trigonometric polynomials, den > 0.

    Used where a coefficient leaves the TrigPoly class (the population model's
    r/k scale and k*b/r terms).  Bounds are certified interval quotients.
    """

    num: TrigPoly
    den: TrigPoly

    def __post_init__(self):
        if self.den.lower_bound() <= 0.0:
            raise ValueError("TrigRatio denominator must be positively bounded below")

    def __call__(self, t):
        return self.num(t) / self.den(t)

    def lower_bound(self) -> float:
        n_lo, _ = self.num.bounds()
        d_lo, d_hi = self.den.bounds()
        return n_lo / d_hi if n_lo >= 0.0 else n_lo / d_lo

    def upper_bound(self) -> float:
        _, n_hi = self.num.bounds()
        d_lo, d_hi = self.den.bounds()
        return n_hi / d_lo if n_hi >= 0.0 else n_hi / d_hi

    def bounds(self) -> tuple[float, float]:
        return self.lower_bound(), self.upper_bound()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def frequencies(self) -> tuple[float, ...]:
        return self.num.frequencies() + self.den.frequencies()

    def time_average(self, span: float = 1e4, step: float = 2.0 ** -6) -> float:
        """Long-time average along t (no exact mean outside the TrigPoly class)."""
        ts = np.arange(0.0, span, step)
        return float(np.mean(self(ts)))

    @classmethod
    def from_dict(cls, d: dict) -> "TrigRatio":
        return cls(TrigPoly.from_dict(d["num"]), TrigPoly.from_dict(d["den"]))

    def to_dict(self) -> dict:
        return {"num": self.num.to_dict(), "den": self.den.to_dict()}


Coefficient = TrigPoly | TrigRatio


def as_coefficient(value) -> Coefficient:
    """Coerce numbers / dicts / coefficients to a coefficient object."""
    if isinstance(value, (TrigPoly, TrigRatio)):
        return value
    if isinstance(value, (int, float)):
        return TrigPoly.constant(value)
    if isinstance(value, dict):
        if "num" in value:
            return TrigRatio.from_dict(value)
        return TrigPoly.from_dict(value)
    raise TypeError(f"cannot interpret {value!r} as a coefficient")
