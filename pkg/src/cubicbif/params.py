"""Shared numerical parameters (windows, thresholds, step sizes)."""

from __future__ import annotations

from dataclasses import dataclass, replace

from .errors import NumericsError

__all__ = ["Numerics", "DEFAULT_NUMERICS", "REDUCED_NUMERICS"]


@dataclass(frozen=True)
class Numerics:
    """Integration and branch-location parameters.

    h           fixed RK4 step
    t_run       transient horizon: forward runs span [-t_run, +t_run],
                backward runs [+t_run, -t_eval]
    t_eval      evaluation half-window: branches are reported on [-t_eval, t_eval]
    report_dt   report-grid spacing (must be an even multiple of h)
    x_max       escape guard
    delta_sep   min-over-window gap defining distinct branches
    delta_match two-start agreement defining a converged branch
    target_width default bisection bracket width
    """

    h: float = 2.0 ** -10
    t_run: float = 1.0e4
    t_eval: float = 1.0e3
    report_dt: float = 1.0
    x_max: float = 1.0e6
    delta_sep: float = 1.0e-6
    delta_match: float = 1.0e-8
    target_width: float = 1.0e-12

    def __post_init__(self):
        if self.h <= 0.0:
            raise NumericsError(f"h must be > 0, got {self.h}")
        for name in ("t_run", "t_eval", "report_dt", "x_max", "delta_sep",
                     "delta_match", "target_width"):
            if getattr(self, name) <= 0.0:
                raise NumericsError(f"{name} must be > 0")
        if self.t_eval >= self.t_run:
            raise NumericsError("t_eval must be smaller than t_run")
        steps = self.report_dt / self.h
        if abs(steps - round(steps)) > 1e-9 or round(steps) < 2 or round(steps) % 2:
            raise NumericsError("report_dt must be an even multiple of h")

    @property
    def steps_per_report(self) -> int:
        return round(self.report_dt / self.h)

    def with_(self, **kwargs) -> "Numerics":
        return replace(self, **kwargs)


DEFAULT_NUMERICS = Numerics()

# Shortcut windows used by bisection midpoints while the bracket is wide.
REDUCED_NUMERICS = Numerics(t_run=2.0e3, t_eval=1.0e3)
